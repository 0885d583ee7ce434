use awcd::awcd::{step_with_start, test_matrix, Neighborhoods};
use awcd::eval::{best_rand_index, partition_from_weights, rand_index, tune_lambda, tune_lambda_on};
use awcd::sbm::{oracle_starts, sample, true_weights, SbmSpec};
use awcd::{Variant, VariantTag};

fn integer_grid(max: usize) -> Vec<f64> {
    (0..=max).map(|l| l as f64).collect()
}

#[test]
fn dense_model_recovered_exactly_on_the_grid() {
    let (g, labels) = sample(&SbmSpec::symmetric(200, 2, 0.5, 0.05).unwrap(), 1);
    let w_star = true_weights(&labels);
    for tag in [VariantTag::Circle, VariantTag::Debiased, VariantTag::Plus] {
        let t = test_matrix(&g, &Neighborhoods::rings(&g, 1), Variant::from(tag));
        let exact: Vec<f64> = integer_grid(200)
            .into_iter()
            .filter(|&l| t.threshold(l) == w_star)
            .collect();
        assert!(!exact.is_empty(), "{tag}: no grid threshold recovers the blocks");
        assert_eq!(best_rand_index(&t, &labels).unwrap().0, 1.0);
    }
}

#[test]
fn modularity_tuning_finds_the_blocks() {
    let (g, labels) = sample(&SbmSpec::symmetric(500, 2, 0.2, 0.02).unwrap(), 1);
    let w_star = true_weights(&labels);
    let (lambda, q) = tune_lambda(&g, 1, Variant::debiased(), &integer_grid(200)).unwrap();
    let w = test_matrix(&g, &Neighborhoods::rings(&g, 1), Variant::debiased()).threshold(lambda);
    let blocks = true_weights(&partition_from_weights(&w));
    assert!(
        rand_index(&blocks, &w_star).unwrap() >= 0.95,
        "lambda {lambda}, modularity {q}"
    );
}

#[test]
fn tuning_prefers_the_smallest_of_equal_thresholds() {
    let (g, _) = sample(&SbmSpec::symmetric(60, 2, 0.4, 0.05).unwrap(), 3);
    let t = test_matrix(&g, &Neighborhoods::rings(&g, 1), Variant::debiased());
    let above = t.max_finite() + 1.0;
    let (lambda, _) = tune_lambda_on(&g, &t, &[above + 2.0, above, above + 1.0]).unwrap();
    assert_eq!(lambda, above);
}

#[test]
fn oracle_start_recovers_the_blocks() {
    let (g, labels) = sample(&SbmSpec::symmetric(150, 2, 0.3, 0.1).unwrap(), 5);
    let w_star = true_weights(&labels);
    let start = oracle_starts(&labels, 149, 11).unwrap();
    let t = test_matrix(&g, &Neighborhoods::from_sets(start.clone()), Variant::debiased());
    let (mut same_max, mut cross_min) = (0.0f64, f64::INFINITY);
    for i in 0..labels.len() {
        for j in i + 1..labels.len() {
            if labels.label(i) == labels.label(j) {
                same_max = same_max.max(t.get(i, j));
            } else {
                cross_min = cross_min.min(t.get(i, j));
            }
        }
    }
    assert!(
        same_max < cross_min,
        "same-block max {same_max}, cross-block min {cross_min}"
    );
    let lambda = (same_max + cross_min) / 2.0;
    assert_eq!(step_with_start(&g, start, Variant::debiased(), lambda), w_star);
}
