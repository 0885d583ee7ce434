use thiserror::Error;

use super::CountPair;

#[derive(Debug, Error, PartialEq)]
#[error("probability {0} outside [0, 1]")]
pub struct DomainError(pub f64);

/// `p * ln(p / q)` with `0 * ln(0 / q) = 0`.
#[inline]
fn xlogx_ratio(p: f64, q: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else if q == 0.0 {
        f64::INFINITY
    } else {
        p * (p / q).ln()
    }
}

#[inline]
pub(crate) fn kl_unchecked(p: f64, q: f64) -> f64 {
    let v = xlogx_ratio(p, q) + xlogx_ratio(1.0 - p, 1.0 - q);
    // rounding can push the sum a hair below zero when p is close to q
    v.max(0.0)
}

/// Kullback-Leibler divergence between Bernoulli(p) and Bernoulli(q).
pub fn bernoulli_kl(p: f64, q: f64) -> Result<f64, DomainError> {
    for x in [p, q] {
        if !(0.0..=1.0).contains(&x) {
            return Err(DomainError(x));
        }
    }
    Ok(kl_unchecked(p, q))
}

/// Maximum-likelihood edge densities for a pair and their pooled estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thetas {
    pub ii: f64,
    pub jj: f64,
    pub ij: f64,
    pub pooled: f64,
}

#[inline]
fn ratio(s: u64, n: u64) -> f64 {
    if n == 0 {
        0.0
    } else {
        s as f64 / n as f64
    }
}

pub fn estimate_thetas(c_ii: CountPair, c_jj: CountPair, c_ij: CountPair) -> Thetas {
    Thetas {
        ii: ratio(c_ii.s, c_ii.n),
        jj: ratio(c_jj.s, c_jj.n),
        ij: ratio(c_ij.s, c_ij.n),
        pooled: ratio(c_ii.s + 2 * c_ij.s + c_jj.s, c_ii.n + 2 * c_ij.n + c_jj.n),
    }
}

/// Likelihood-ratio statistic for "one density" against "three densities".
/// Terms with zero pairs contribute nothing.
pub fn test_statistic(c_ii: CountPair, c_jj: CountPair, c_ij: CountPair) -> f64 {
    let th = estimate_thetas(c_ii, c_jj, c_ij);
    let term = |n: u64, p: f64| {
        if n == 0 {
            0.0
        } else {
            n as f64 * kl_unchecked(p, th.pooled)
        }
    };
    term(c_ii.n, th.ii) + term(c_jj.n, th.jj) + term(c_ij.n, th.ij)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn kl_values() {
        assert_eq!(bernoulli_kl(0.3, 0.3), Ok(0.0));
        assert!((bernoulli_kl(1.0, 0.5).unwrap() - LN_2).abs() < 1e-15);
        assert!((bernoulli_kl(0.0, 0.5).unwrap() - LN_2).abs() < 1e-15);
        assert_eq!(bernoulli_kl(0.5, 0.0), Ok(f64::INFINITY));
        assert_eq!(bernoulli_kl(0.5, 1.0), Ok(f64::INFINITY));
        assert_eq!(bernoulli_kl(0.0, 0.0), Ok(0.0));
        assert_eq!(bernoulli_kl(1.0, 1.0), Ok(0.0));
        assert_eq!(bernoulli_kl(1.2, 0.5), Err(DomainError(1.2)));
        assert_eq!(bernoulli_kl(0.5, -0.1), Err(DomainError(-0.1)));
        assert!(bernoulli_kl(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn kl_nonnegative_on_grid() {
        for a in 0..=50 {
            for b in 1..50 {
                let (p, q) = (a as f64 / 50.0, b as f64 / 50.0);
                let v = bernoulli_kl(p, q).unwrap();
                assert!(v >= 0.0);
                assert_eq!(v == 0.0, a == b, "p={p} q={q} kl={v}");
            }
        }
    }

    #[test]
    fn thetas() {
        let all = CountPair::new(5, 5);
        let t = estimate_thetas(all, all, all);
        assert_eq!((t.ii, t.jj, t.ij, t.pooled), (1.0, 1.0, 1.0, 1.0));

        let zero = CountPair::new(0, 7);
        let t = estimate_thetas(zero, zero, zero);
        assert_eq!((t.ii, t.jj, t.ij, t.pooled), (0.0, 0.0, 0.0, 0.0));

        let t = estimate_thetas(CountPair::new(4, 8), CountPair::new(4, 8), CountPair::new(1, 8));
        assert_eq!((t.ii, t.jj, t.ij, t.pooled), (0.5, 0.5, 0.125, 0.3125));

        let t = estimate_thetas(CountPair::default(), CountPair::default(), CountPair::default());
        assert_eq!(t.pooled, 0.0);
    }

    #[test]
    fn statistic_values() {
        let same = test_statistic(CountPair::new(3, 6), CountPair::new(5, 10), CountPair::new(4, 8));
        assert_eq!(same, 0.0);

        let t = test_statistic(CountPair::new(8, 8), CountPair::new(8, 8), CountPair::new(0, 8));
        assert!((t - 24.0 * LN_2).abs() < 1e-12);
        assert!((t - 16.6355).abs() < 1e-4);

        let empty = CountPair::default();
        assert_eq!(test_statistic(empty, empty, empty), 0.0);
    }
}
