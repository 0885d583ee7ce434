//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use awcd::awcd::{BiasIndicator, VariantTag};
use awcd::{CountPair, Graph, Variant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const UNREACHABLE: usize = usize::MAX;

/// Adjacency matrix and all-pairs distances of a small graph.
pub struct Dense {
    pub n: usize,
    pub adj: Vec<Vec<bool>>,
    pub dist: Vec<Vec<usize>>,
}

impl Dense {
    pub fn new(g: &Graph) -> Self {
        let n = g.n_vertices();
        let mut adj = vec![vec![false; n]; n];
        for (u, v) in g.edges() {
            adj[u][v] = true;
            adj[v][u] = true;
        }
        // Floyd-Warshall.
        let mut dist = vec![vec![UNREACHABLE; n]; n];
        for u in 0..n {
            dist[u][u] = 0;
            for v in 0..n {
                if adj[u][v] {
                    dist[u][v] = 1;
                }
            }
        }
        for m in 0..n {
            for u in 0..n {
                for v in 0..n {
                    if dist[u][m] != UNREACHABLE && dist[m][v] != UNREACHABLE {
                        let via = dist[u][m] + dist[m][v];
                        if via < dist[u][v] {
                            dist[u][v] = via;
                        }
                    }
                }
            }
        }
        Dense { n, adj, dist }
    }

    pub fn ring(&self, x: usize, k: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.dist[x][v] == k).collect()
    }

    fn edges_between(&self, a: &[usize], b: &[usize]) -> u64 {
        let mut s = 0;
        for &u in a {
            for &v in b {
                if self.adj[u][v] {
                    s += 1;
                }
            }
        }
        s
    }

    /// Counts for the pair `(i, j)` with radius-`k` rings, straight from the
    /// definitions.
    pub fn counts(&self, k: usize, i: usize, j: usize, variant: Variant) -> CountPair {
        let (ci, cj) = (self.ring(i, k), self.ring(j, k));
        let n_circle = (ci.len() * (cj.len() - usize::from(i == j && !cj.is_empty()))) as u64;
        match variant.tag {
            VariantTag::Circle => CountPair::new(self.edges_between(&ci, &cj), n_circle),
            VariantTag::Debiased if k == 1 => {
                // Edges between neighbors of i and neighbors of j, with walks
                // through i or j left out.
                let mut s = 0;
                for l in 0..self.n {
                    for m in 0..self.n {
                        let outside = ![i, j].contains(&l) && ![i, j].contains(&m);
                        if outside && self.adj[i][l] && self.adj[j][m] && self.adj[m][l] {
                            s += 1;
                        }
                    }
                }
                CountPair::new(s, n_circle)
            }
            VariantTag::Debiased => {
                let gate = match variant.bias {
                    BiasIndicator::Edge => self.adj[i][j],
                    BiasIndicator::Diag => i == j,
                };
                let correction = if gate { (ci.len() + cj.len()) as u64 } else { 0 };
                CountPair::new(self.edges_between(&ci, &cj).saturating_sub(correction), n_circle)
            }
            VariantTag::Plus => {
                let (inner_i, inner_j) = (self.ring(i, k - 1), self.ring(j, k - 1));
                let a: Vec<usize> = ci.into_iter().filter(|v| !inner_j.contains(v)).collect();
                let b: Vec<usize> = cj.into_iter().filter(|v| !inner_i.contains(v)).collect();
                let mut s = 0;
                let mut n = 0;
                for &u in &a {
                    for &v in &b {
                        if u != v {
                            n += 1;
                            if self.adj[u][v] {
                                s += 1;
                            }
                        }
                    }
                }
                CountPair::new(s, n)
            }
        }
    }
}

pub fn all_variants() -> [Variant; 4] {
    [
        Variant::circle(),
        Variant::debiased(),
        Variant::debiased().with_bias(BiasIndicator::Diag),
        Variant::plus(),
    ]
}

/// Erdos-Renyi graph with `n` vertices and edge probability `p`.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// The `idx`-th graph of a fixed family of small random graphs.
pub fn small_graph(idx: u64, max_n: usize) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + idx);
    let n = rng.gen_range(1..=max_n);
    let p = rng.gen_range(0.03..0.5);
    random_graph(&mut rng, n, p)
}
