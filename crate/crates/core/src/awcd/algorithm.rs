use crate::graph::{Graph, VertexSet};

use super::counts::{Neighborhoods, PairCounter};
use super::kl::test_statistic;
use super::{AwcdConfig, TestMatrix, Variant, WeightMatrix};

/// Test statistics for every pair.
///
/// A pair `i != j` whose three pair counts are all zero gets `+inf`: with no
/// evidence either way the two vertices are kept apart.
pub fn test_matrix(g: &Graph, nb: &Neighborhoods, variant: Variant) -> TestMatrix {
    let n = g.n_vertices();
    let counter = PairCounter::new(g, nb, variant);
    let mut upper = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    counter.for_each_upper(|i, j, c_ij| {
        let (c_ii, c_jj) = (counter.diag(i), counter.diag(j));
        let t = if c_ii.n == 0 && c_jj.n == 0 && c_ij.n == 0 {
            f64::INFINITY
        } else {
            test_statistic(c_ii, c_jj, c_ij)
        };
        upper.push(t);
    });
    TestMatrix::from_upper(n, upper)
}

/// One pass: statistics from the given neighborhoods, then `W_ij = [T_ij <= lambda]`.
pub fn step(g: &Graph, nb: &Neighborhoods, config: &AwcdConfig) -> (WeightMatrix, TestMatrix) {
    let t = test_matrix(g, nb, config.variant);
    (t.threshold(config.lambda), t)
}

/// One pass from caller-supplied starting communities, counted with the
/// radius-1 rules. Sets must not contain their own vertex.
pub fn step_with_start(g: &Graph, start: Vec<VertexSet>, variant: Variant, lambda: f64) -> WeightMatrix {
    debug_assert!(start.iter().enumerate().all(|(i, s)| !s.contains(i)));
    let nb = Neighborhoods::from_sets(start);
    test_matrix(g, &nb, variant).threshold(lambda)
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub weights: WeightMatrix,
    /// Test matrix of every iteration, first iteration first.
    pub tests: Vec<TestMatrix>,
    /// Weight matrix after every iteration; the last equals `weights`.
    pub history: Vec<WeightMatrix>,
}

/// Iterated procedure: the first pass starts from the radius-`k` rings, each
/// later pass from the rows of the previous weight matrix.
pub fn run(g: &Graph, config: &AwcdConfig) -> RunOutput {
    assert!(config.l_max >= 1, "need at least one iteration");
    let mut nb = Neighborhoods::rings(g, config.k);
    let mut tests = Vec::with_capacity(config.l_max);
    let mut history = Vec::with_capacity(config.l_max);
    for iteration in 0..config.l_max {
        let (w, t) = step(g, &nb, config);
        tests.push(t);
        if iteration + 1 < config.l_max {
            nb = Neighborhoods::from_sets(w.communities());
        }
        history.push(w);
    }
    RunOutput {
        weights: history.last().cloned().expect("at least one iteration"),
        tests,
        history,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::load_edge_list;

    #[test]
    fn extreme_thresholds() {
        let g = load_edge_list("5\n0 1\n1 2\n2 0\n2 3\n3 4").unwrap();
        let nb = Neighborhoods::rings(&g, 1);
        let cfg = AwcdConfig::new(1, -1.0, Variant::debiased());
        let (w, t) = step(&g, &nb, &cfg);
        assert_eq!(w, WeightMatrix::identity(5));
        assert!(t.upper().iter().all(|&v| v >= 0.0 && v.is_finite()));
        let (w, _) = step(&g, &nb, &cfg.with_lambda(f64::MAX));
        assert_eq!(w, WeightMatrix::ones(5));
    }

    #[test]
    fn isolated_vertices_stay_apart() {
        let g = load_edge_list("4\n0 1").unwrap();
        let nb = Neighborhoods::rings(&g, 1);
        let t = test_matrix(&g, &nb, Variant::circle());
        assert_eq!(t.get(2, 3), f64::INFINITY);
        let w = t.threshold(f64::MAX);
        assert!(!w.get(2, 3) && w.get(0, 1));
    }

    #[test]
    fn empty_start_gives_identity() {
        let g = load_edge_list("4\n0 1\n1 2\n2 3\n3 0").unwrap();
        let w = step_with_start(&g, vec![VertexSet::new(); 4], Variant::debiased(), 1e9);
        assert_eq!(w, WeightMatrix::identity(4));
    }

    #[test]
    fn single_iteration_run_is_step() {
        let g = load_edge_list("6\n0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n2 3").unwrap();
        let cfg = AwcdConfig::new(1, 0.5, Variant::debiased());
        let out = run(&g, &cfg);
        let (w, t) = step(&g, &Neighborhoods::rings(&g, 1), &cfg);
        assert_eq!(out.weights, w);
        assert_eq!(out.tests, vec![t]);
    }
}
