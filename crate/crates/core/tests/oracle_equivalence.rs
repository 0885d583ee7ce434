mod common;

use awcd::awcd::{pair_counts, test_matrix, test_statistic, Neighborhoods, PairCounter};
use common::{all_variants, small_graph, Dense};

#[test]
fn counts_match_brute_force_on_random_graphs() {
    for idx in 0..100 {
        let g = small_graph(idx, 40);
        let dense = Dense::new(&g);
        let n = g.n_vertices();
        for k in 1..=2 {
            let nb = Neighborhoods::rings(&g, k);
            for variant in all_variants() {
                let counter = PairCounter::new(&g, &nb, variant);
                for i in 0..n {
                    let expected = dense.counts(k, i, i, variant);
                    assert_eq!(counter.diag(i), expected, "graph {idx} k={k} {variant:?} diag {i}");
                    assert_eq!(pair_counts(&g, &nb, i, i, variant), expected);
                }
                let mut seen = 0;
                counter.for_each_upper(|i, j, c| {
                    let expected = dense.counts(k, i, j, variant);
                    assert_eq!(c, expected, "graph {idx} k={k} {variant:?} pair ({i}, {j})");
                    assert_eq!(counter.counts(i, j), expected);
                    assert_eq!(pair_counts(&g, &nb, i, j, variant), expected);
                    assert_eq!(dense.counts(k, j, i, variant).n, expected.n);
                    seen += 1;
                });
                assert_eq!(seen, n * n.saturating_sub(1) / 2);
            }
        }
    }
}

#[test]
fn test_matrix_matches_pairwise_statistics() {
    for idx in 0..20 {
        let g = small_graph(1000 + idx, 25);
        let dense = Dense::new(&g);
        for k in 1..=3 {
            let nb = Neighborhoods::rings(&g, k);
            for variant in all_variants() {
                let t = test_matrix(&g, &nb, variant);
                for i in 0..g.n_vertices() {
                    assert_eq!(t.get(i, i), 0.0);
                    for j in i + 1..g.n_vertices() {
                        let (cii, cjj, cij) = (
                            dense.counts(k, i, i, variant),
                            dense.counts(k, j, j, variant),
                            dense.counts(k, i, j, variant),
                        );
                        let expected = if cii.n == 0 && cjj.n == 0 && cij.n == 0 {
                            f64::INFINITY
                        } else {
                            test_statistic(cii, cjj, cij)
                        };
                        assert_eq!(t.get(i, j), expected, "graph {idx} k={k} {variant:?} ({i}, {j})");
                        assert_eq!(t.get(j, i), expected);
                    }
                }
            }
        }
    }
}

#[test]
fn reference_counts_for_hand_checked_graphs() {
    let k4 = awcd::graph::load_edge_list("4\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3").unwrap();
    let dense = Dense::new(&k4);
    assert_eq!(
        dense.counts(1, 0, 1, awcd::Variant::circle()),
        awcd::CountPair::new(7, 9)
    );
    assert_eq!(
        dense.counts(1, 0, 1, awcd::Variant::debiased()),
        awcd::CountPair::new(2, 9)
    );
    let triangle = awcd::graph::load_edge_list("3\n0 1\n1 2\n2 0").unwrap();
    assert_eq!(Dense::new(&triangle).counts(1, 0, 1, awcd::Variant::debiased()).s, 0);
}
