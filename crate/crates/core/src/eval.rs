//! Scoring a weight matrix against the truth, and picking a threshold by modularity.

use std::collections::VecDeque;

use thiserror::Error;

use crate::awcd::{test_matrix, Neighborhoods, TestMatrix, Variant, WeightMatrix};
use crate::graph::Graph;
use crate::sbm::Labeling;

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("need at least two vertices")]
    TooSmall,
    #[error("modularity is undefined on a graph without edges")]
    NoEdges,
    #[error("empty lambda grid")]
    EmptyGrid,
}

fn check_dims(a: usize, b: usize) -> Result<(), EvalError> {
    if a != b {
        return Err(EvalError::DimensionMismatch(a, b));
    }
    Ok(())
}

/// Fraction of unordered pairs `i < j` on which the two weight matrices agree.
pub fn rand_index(w: &WeightMatrix, w_star: &WeightMatrix) -> Result<f64, EvalError> {
    check_dims(w.n(), w_star.n())?;
    let n = w.n();
    if n < 2 {
        return Err(EvalError::TooSmall);
    }
    let pairs = n * (n - 1) / 2;
    Ok((pairs - w.disagreements(w_star)) as f64 / pairs as f64)
}

pub fn exact_recovery(w: &WeightMatrix, w_star: &WeightMatrix) -> Result<bool, EvalError> {
    check_dims(w.n(), w_star.n())?;
    Ok(w == w_star)
}

/// Connected components of the off-diagonal 1-entries, labeled in order of
/// their smallest member.
pub fn partition_from_weights(w: &WeightMatrix) -> Labeling {
    let n = w.n();
    let mut labels = vec![usize::MAX; n];
    let mut next = 0;
    let mut queue = VecDeque::new();
    for start in 0..n {
        if labels[start] != usize::MAX {
            continue;
        }
        labels[start] = next;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for v in w.row(u).iter() {
                if labels[v] == usize::MAX {
                    labels[v] = next;
                    queue.push_back(v);
                }
            }
        }
        next += 1;
    }
    Labeling::new(labels)
}

/// Newman-Girvan modularity of `labels` on `g`.
pub fn modularity(g: &Graph, labels: &Labeling) -> Result<f64, EvalError> {
    check_dims(g.n_vertices(), labels.len())?;
    if g.n_edges() == 0 {
        return Err(EvalError::NoEdges);
    }
    let m = g.n_edges() as f64;
    let k = labels.n_labels();
    let mut internal = vec![0usize; k];
    let mut degree_sum = vec![0usize; k];
    for v in 0..g.n_vertices() {
        degree_sum[labels.label(v)] += g.degree(v);
    }
    for (u, v) in g.edges() {
        if labels.label(u) == labels.label(v) {
            internal[labels.label(u)] += 1;
        }
    }
    Ok(internal
        .iter()
        .zip(&degree_sum)
        .map(|(&l, &d)| l as f64 / m - (d as f64 / (2.0 * m)).powi(2))
        .sum())
}

/// Rand index of the thresholded matrix `[T <= lambda]` against the block
/// structure of `truth`, without materializing the weight matrix.
pub fn rand_index_at(t: &TestMatrix, truth: &Labeling, lambda: f64) -> Result<f64, EvalError> {
    check_dims(t.n(), truth.len())?;
    let n = t.n();
    if n < 2 {
        return Err(EvalError::TooSmall);
    }
    let labels = truth.labels();
    let mut agree = 0usize;
    let mut idx = 0;
    let upper = t.upper();
    for i in 0..n {
        for j in i + 1..n {
            if (upper[idx] <= lambda) == (labels[i] == labels[j]) {
                agree += 1;
            }
            idx += 1;
        }
    }
    Ok(agree as f64 / upper.len() as f64)
}

/// Best Rand index over all thresholds and the smallest threshold attaining
/// it. Thresholding below every statistic (nothing merged) is reported as
/// `-inf`.
pub fn best_rand_index(t: &TestMatrix, truth: &Labeling) -> Result<(f64, f64), EvalError> {
    check_dims(t.n(), truth.len())?;
    let n = t.n();
    if n < 2 {
        return Err(EvalError::TooSmall);
    }
    let labels = truth.labels();
    let mut entries = Vec::with_capacity(t.upper().len());
    let mut idx = 0;
    for i in 0..n {
        for j in i + 1..n {
            entries.push((t.upper()[idx], labels[i] == labels[j]));
            idx += 1;
        }
    }
    entries.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
    let total = entries.len() as f64;
    let mut agree: i64 = entries.iter().filter(|e| !e.1).count() as i64;
    let (mut best, mut best_lambda) = (agree, f64::NEG_INFINITY);
    let mut pos = 0;
    while pos < entries.len() {
        let value = entries[pos].0;
        while pos < entries.len() && entries[pos].0 == value {
            agree += if entries[pos].1 { 1 } else { -1 };
            pos += 1;
        }
        if agree > best {
            best = agree;
            best_lambda = value;
        }
    }
    Ok((best as f64 / total, best_lambda))
}

/// Picks the threshold in `grid` whose weight matrix, reduced to connected
/// components, has the highest modularity on `g`. Ties go to the smaller
/// threshold. Returns `(lambda, modularity)`.
pub fn tune_lambda(g: &Graph, k: usize, variant: Variant, grid: &[f64]) -> Result<(f64, f64), EvalError> {
    let t = test_matrix(g, &Neighborhoods::rings(g, k), variant);
    tune_lambda_on(g, &t, grid)
}

/// [`tune_lambda`] for a precomputed test matrix.
pub fn tune_lambda_on(g: &Graph, t: &TestMatrix, grid: &[f64]) -> Result<(f64, f64), EvalError> {
    if grid.is_empty() {
        return Err(EvalError::EmptyGrid);
    }
    if g.n_edges() == 0 {
        return Err(EvalError::NoEdges);
    }
    let mut best: Option<(f64, f64)> = None;
    for &lambda in grid {
        let q = modularity(g, &partition_from_weights(&t.threshold(lambda)))?;
        best = match best {
            Some((bl, bq)) if bq > q || (bq == q && bl <= lambda) => Some((bl, bq)),
            _ => Some((lambda, q)),
        };
    }
    Ok(best.expect("non-empty grid"))
}
