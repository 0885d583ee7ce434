//! Closed-form quantities for the symmetric block model.
//!
//! Consistency regions live in the `(log_n θ, log_n((θ-ρ)/θ))` plane.

use num_rational::Ratio;
use thiserror::Error;

use crate::awcd::VariantTag;

pub type Rational = Ratio<i64>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TheoryError {
    #[error("no consistency region for variant {0} with radius {1}")]
    Unsupported(VariantTag, usize),
}

/// Expected fraction coefficients `(a_k, b_k)` of a radius-`k` ring that falls
/// inside (`a_k`) or outside (`b_k`) a given community, per `n^k`.
pub fn ak_bk(theta: f64, rho: f64, n_blocks: usize, k: usize) -> (f64, f64) {
    assert!(n_blocks >= 2, "need at least two blocks");
    assert!(k >= 1, "radius must be positive");
    let others = (n_blocks - 1) as f64;
    let (mut a, mut b) = (theta, rho);
    for _ in 1..k {
        let next_a = theta * a + others * rho * b;
        let next_b = rho * a + theta * b + (others - 1.0) * rho * b;
        a = next_a;
        b = next_b;
    }
    (a, b)
}

/// Expected debiased radius-1 edge counts for same-community pairs (`a`),
/// cross-community pairs (`c`) and the pair count scale `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectedCounts {
    pub a: f64,
    pub c: f64,
    pub d: f64,
}

pub fn expected_counts_k1(theta: f64, rho: f64, n_blocks: usize, n: usize) -> ExpectedCounts {
    assert!(n_blocks >= 2, "need at least two blocks");
    assert!(n >= 1, "block size must be positive");
    let k = n_blocks as f64;
    let n2 = (n as f64).powi(2);
    let (t, r) = (theta, rho);
    let a = n2 * (t.powi(3) + 3.0 * (k - 1.0) * t * r * r + (k - 1.0) * (k - 2.0) * r.powi(3));
    // c expands to 3t²r + 3(K-2)tr² + ((K-1)(K-2)+1)r³, which differs from a by
    // exactly (t-r)³; writing it that way keeps a == c bit-exact when t == r.
    ExpectedCounts {
        a,
        c: a - n2 * (t - r).powi(3),
        d: n2 * (t * t + 2.0 * (k - 1.0) * t * r + (k - 1.0).powi(2) * r * r),
    }
}

/// Corner points of a consistency region, `x = log_n θ`,
/// `y = log_n((θ - ρ) / θ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonSpec {
    pub variant: VariantTag,
    pub k: usize,
    pub vertices: Vec<(Rational, Rational)>,
}

fn r(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

pub fn consistency_polygon(variant: VariantTag, k: usize) -> Result<PolygonSpec, TheoryError> {
    let zero = Rational::from_integer(0);
    let ki = k as i64;
    let vertices = match (variant, k) {
        (_, 0) => return Err(TheoryError::Unsupported(variant, k)),
        (VariantTag::Debiased, 1) => vec![(zero, zero), (zero, r(-1, 6)), (r(-1, 2), r(-1, 12)), (r(-2, 3), zero)],
        (VariantTag::Circle, 1) => vec![(zero, zero), (zero, r(-1, 6)), (r(-1, 3), r(-1, 9)), (r(-1, 2), zero)],
        (VariantTag::Plus, 1) => return Err(TheoryError::Unsupported(variant, k)),
        (tag, _) => {
            let first = (r(-(ki - 1), ki), zero);
            let second = (r(-(2 * ki - 1), 2 * ki + 1), r(-1, (2 * ki + 1) * (2 * ki + 1)));
            match tag {
                VariantTag::Debiased => vec![
                    first,
                    second,
                    (r(-ki, ki + 1), r(-1, (4 * ki + 2) * (ki + 1))),
                    (r(-(2 * ki + 1), 2 * ki + 3), zero),
                ],
                VariantTag::Plus => vec![
                    first,
                    second,
                    (r(-(2 * ki - 1), 2 * ki), r(-1, 2 * ki * (4 * ki + 2))),
                    (r(-2 * ki, 2 * ki + 1), zero),
                ],
                VariantTag::Circle => vec![first, second, (r(-ki, ki + 1), zero)],
            }
        }
    };
    Ok(PolygonSpec { variant, k, vertices })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recursion_base_and_one_step() {
        assert_eq!(ak_bk(0.3, 0.1, 3, 1), (0.3, 0.1));
        assert_eq!(ak_bk(0.5, 0.25, 2, 2), (0.3125, 0.25));
    }

    #[test]
    fn expected_counts_values() {
        let e = expected_counts_k1(0.5, 0.0, 2, 10);
        assert_eq!((e.a, e.c, e.d), (12.5, 0.0, 25.0));
        let e = expected_counts_k1(0.2, 0.2, 4, 7);
        assert_eq!(e.a, e.c);
        for (t, r, k) in [(0.3, 0.1, 2usize), (0.05, 0.04, 5), (0.9, 0.0, 3)] {
            let e = expected_counts_k1(t, r, k, 11);
            let kf = k as f64;
            let expanded =
                121.0 * (3.0 * t * t * r + 3.0 * (kf - 2.0) * t * r * r + ((kf - 1.0) * (kf - 2.0) + 1.0) * r.powi(3));
            assert!((e.c - expanded).abs() <= 1e-12 * expanded.abs().max(1.0));
        }
    }

    #[test]
    fn polygons() {
        let circle2 = consistency_polygon(VariantTag::Circle, 2).unwrap();
        assert_eq!(
            circle2.vertices,
            vec![(r(-1, 2), r(0, 1)), (r(-3, 5), r(-1, 25)), (r(-2, 3), r(0, 1))]
        );
        let plus2 = consistency_polygon(VariantTag::Plus, 2).unwrap();
        assert_eq!(plus2.vertices[2], (r(-3, 4), r(-1, 40)));
        assert_eq!(plus2.vertices[3], (r(-4, 5), r(0, 1)));
        let deb2 = consistency_polygon(VariantTag::Debiased, 2).unwrap();
        assert_eq!(deb2.vertices[2], (r(-2, 3), r(-1, 30)));
        assert_eq!(deb2.vertices[3], (r(-5, 7), r(0, 1)));
        assert_eq!(
            consistency_polygon(VariantTag::Plus, 1),
            Err(TheoryError::Unsupported(VariantTag::Plus, 1))
        );
        assert!(consistency_polygon(VariantTag::Circle, 0).is_err());
    }
}
