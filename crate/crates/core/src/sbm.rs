//! Seeded stochastic block model sampling.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`. Replicate `r` of an experiment with base seed `b` samples
//! with [`replicate_seed`]`(b, r)`, the first output of ChaCha8 keyed by `b`
//! on stream `r`.

use rand::seq::index;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::awcd::WeightMatrix;
use crate::graph::{Graph, VertexSet};

#[derive(Debug, Error, PartialEq)]
pub enum SbmError {
    #[error("block model needs at least one block")]
    NoBlocks,
    #[error("block {0} has size zero")]
    EmptyBlock(usize),
    #[error("expected {expected} within-block probabilities, got {got}")]
    ThetaCount { expected: usize, got: usize },
    #[error("probability {0} outside [0, 1]")]
    Probability(f64),
    #[error("requested {size} members but the community of vertex {vertex} has only {available} others")]
    StartTooLarge {
        vertex: usize,
        size: usize,
        available: usize,
    },
}

/// Block sizes, per-block within probability and one shared between-block
/// probability.
#[derive(Debug, Clone, PartialEq)]
pub struct SbmSpec {
    pub block_sizes: Vec<usize>,
    pub theta_within: Vec<f64>,
    pub rho_between: f64,
}

impl SbmSpec {
    pub fn new(block_sizes: Vec<usize>, theta_within: Vec<f64>, rho_between: f64) -> Result<Self, SbmError> {
        let spec = SbmSpec {
            block_sizes,
            theta_within,
            rho_between,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// `K` blocks of `n` vertices each, within probability `theta`, between
    /// probability `rho`.
    pub fn symmetric(n: usize, k: usize, theta: f64, rho: f64) -> Result<Self, SbmError> {
        SbmSpec::new(vec![n; k], vec![theta; k], rho)
    }

    pub fn validate(&self) -> Result<(), SbmError> {
        if self.block_sizes.is_empty() {
            return Err(SbmError::NoBlocks);
        }
        if let Some(b) = self.block_sizes.iter().position(|&s| s == 0) {
            return Err(SbmError::EmptyBlock(b));
        }
        if self.theta_within.len() != self.block_sizes.len() {
            return Err(SbmError::ThetaCount {
                expected: self.block_sizes.len(),
                got: self.theta_within.len(),
            });
        }
        for &p in self.theta_within.iter().chain(std::iter::once(&self.rho_between)) {
            if !(0.0..=1.0).contains(&p) {
                return Err(SbmError::Probability(p));
            }
        }
        Ok(())
    }

    pub fn n_blocks(&self) -> usize {
        self.block_sizes.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    /// Contiguous labeling: block 0 first, then block 1, and so on.
    pub fn labeling(&self) -> Labeling {
        let labels = self
            .block_sizes
            .iter()
            .enumerate()
            .flat_map(|(b, &size)| std::iter::repeat_n(b, size))
            .collect();
        Labeling::new(labels)
    }
}

/// One community label per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Labeling {
    labels: Vec<usize>,
    n_labels: usize,
}

impl Labeling {
    pub fn new(labels: Vec<usize>) -> Self {
        let n_labels = labels.iter().max().map_or(0, |&m| m + 1);
        Labeling { labels, n_labels }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_labels(&self) -> usize {
        self.n_labels
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn members(&self, label: usize) -> impl Iterator<Item = usize> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter(move |(_, &l)| l == label)
            .map(|(v, _)| v)
    }

    /// One label per line.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.labels.len() * 2);
        for l in &self.labels {
            out.push_str(&l.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, String> {
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                l.trim()
                    .parse::<usize>()
                    .map_err(|_| format!("line {}: invalid label {:?}", i + 1, l.trim()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Labeling::new)
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed for replicate `r` derived from `base`.
pub fn replicate_seed(base: u64, r: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(r);
    rng.next_u64()
}

/// Samples a graph: every unordered pair `u < v`, visited in row-major order,
/// becomes an edge when one uniform `f64` draw falls below its probability.
pub fn sample(spec: &SbmSpec, seed: u64) -> (Graph, Labeling) {
    spec.validate().expect("invalid block model");
    let labeling = spec.labeling();
    let n = labeling.len();
    let labels = labeling.labels();
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if labels[u] == labels[v] {
                spec.theta_within[labels[u]]
            } else {
                spec.rho_between
            };
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    let g = Graph::from_edges(n, edges).expect("sampled pairs are valid edges");
    (g, labeling)
}

/// Block indicator matrix: entry `(i, j)` is 1 iff `i` and `j` share a label.
pub fn true_weights(labels: &Labeling) -> WeightMatrix {
    let n = labels.len();
    let mut w = WeightMatrix::identity(n);
    for l in 0..labels.n_labels() {
        let members: Vec<usize> = labels.members(l).collect();
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                w.set(i, j, true);
            }
        }
    }
    w
}

/// Uniform random subset of `size` members of the true community of `i`,
/// excluding `i` itself.
pub fn oracle_start(labels: &Labeling, i: usize, size: usize, seed: u64) -> Result<VertexSet, SbmError> {
    let pool: Vec<usize> = labels.members(labels.label(i)).filter(|&v| v != i).collect();
    if size > pool.len() {
        return Err(SbmError::StartTooLarge {
            vertex: i,
            size,
            available: pool.len(),
        });
    }
    let mut rng = rng_from_seed(seed);
    let picked = index::sample(&mut rng, pool.len(), size);
    Ok(picked.iter().map(|p| pool[p]).collect())
}

/// Oracle starting sets for every vertex; vertex `i` draws with
/// `replicate_seed(seed, i)`.
pub fn oracle_starts(labels: &Labeling, size: usize, seed: u64) -> Result<Vec<VertexSet>, SbmError> {
    (0..labels.len())
        .map(|i| oracle_start(labels, i, size, replicate_seed(seed, i as u64)))
        .collect()
}
