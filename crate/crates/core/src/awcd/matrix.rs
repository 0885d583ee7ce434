use std::fmt::Write as _;

use crate::bitset::BitSet;
use crate::graph::VertexSet;

/// Symmetric binary matrix with unit diagonal, stored as one bit row per
/// vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightMatrix {
    rows: Vec<BitSet>,
}

impl WeightMatrix {
    pub fn identity(n: usize) -> Self {
        let mut rows = vec![BitSet::new(n); n];
        for (i, row) in rows.iter_mut().enumerate() {
            row.insert(i);
        }
        WeightMatrix { rows }
    }

    pub fn ones(n: usize) -> Self {
        let mut w = WeightMatrix::identity(n);
        for i in 0..n {
            for j in i + 1..n {
                w.set(i, j, true);
            }
        }
        w
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    /// Sets both `(i, j)` and `(j, i)`. Diagonal entries stay 1.
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        if i == j {
            return;
        }
        if value {
            self.rows[i].insert(j);
            self.rows[j].insert(i);
        } else {
            self.rows[i].remove(j);
            self.rows[j].remove(i);
        }
    }

    pub fn row(&self, i: usize) -> &BitSet {
        &self.rows[i]
    }

    /// Number of 1-entries, diagonal included.
    pub fn count_ones(&self) -> usize {
        self.rows.iter().map(BitSet::count_ones).sum()
    }

    /// Off-diagonal 1-entries `(i, j)` with `i < j`, row by row.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().filter(move |&j| j > i).map(move |j| (i, j)))
    }

    /// Row sets without the diagonal, the local communities of the next
    /// iteration.
    pub fn communities(&self) -> Vec<VertexSet> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, row)| row.iter().filter(|&j| j != i).collect())
            .collect()
    }

    /// Number of unordered pairs `i < j` on which the two matrices differ.
    pub fn disagreements(&self, other: &WeightMatrix) -> usize {
        assert_eq!(self.n(), other.n());
        let total: usize = self.rows.iter().zip(&other.rows).map(|(a, b)| a.hamming(b)).sum();
        total / 2
    }

    pub fn permuted(&self, perm: &[usize]) -> WeightMatrix {
        let mut out = WeightMatrix::identity(self.n());
        for (i, j) in self.pairs() {
            out.set(perm[i], perm[j], true);
        }
        out
    }
}

/// Symmetric matrix of test statistics with zero diagonal. Only the strict
/// upper triangle is stored.
#[derive(Debug, Clone, PartialEq)]
pub struct TestMatrix {
    n: usize,
    upper: Vec<f64>,
}

impl TestMatrix {
    pub fn zeros(n: usize) -> Self {
        TestMatrix {
            n,
            upper: vec![0.0; n * n.saturating_sub(1) / 2],
        }
    }

    pub(crate) fn from_upper(n: usize, upper: Vec<f64>) -> Self {
        assert_eq!(upper.len(), n * n.saturating_sub(1) / 2);
        TestMatrix { n, upper }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n);
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Less => self.upper[self.index(i, j)],
            std::cmp::Ordering::Greater => self.upper[self.index(j, i)],
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        assert_ne!(i, j, "diagonal is fixed at zero");
        let idx = if i < j { self.index(i, j) } else { self.index(j, i) };
        self.upper[idx] = value;
    }

    /// Values for `i < j` in row-major order.
    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// `W_ij = 1` iff `T_ij <= lambda`.
    pub fn threshold(&self, lambda: f64) -> WeightMatrix {
        let mut w = WeightMatrix::identity(self.n);
        let mut idx = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.upper[idx] <= lambda {
                    w.set(i, j, true);
                }
                idx += 1;
            }
        }
        w
    }

    /// Largest finite off-diagonal value, 0 when there is none.
    pub fn max_finite(&self) -> f64 {
        self.upper.iter().copied().filter(|v| v.is_finite()).fold(0.0, f64::max)
    }

    /// Dense comma-separated rows; infinities are written as `inf`.
    pub fn to_dense_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if j > 0 {
                    out.push(',');
                }
                write!(out, "{}", self.get(i, j)).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_matrix_basics() {
        let mut w = WeightMatrix::identity(4);
        assert_eq!(w.count_ones(), 4);
        w.set(0, 2, true);
        assert!(w.get(2, 0));
        w.set(1, 1, false);
        assert!(w.get(1, 1));
        assert_eq!(w.pairs().collect::<Vec<_>>(), vec![(0, 2)]);
        assert_eq!(w.communities()[0].as_slice(), &[2]);
        assert_eq!(w.disagreements(&WeightMatrix::identity(4)), 1);
        assert_eq!(WeightMatrix::ones(3).count_ones(), 9);
    }

    #[test]
    fn test_matrix_indexing() {
        let n = 5;
        let mut t = TestMatrix::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                t.set(j, i, (10 * i + j) as f64);
            }
        }
        for i in 0..n {
            assert_eq!(t.get(i, i), 0.0);
            for j in i + 1..n {
                assert_eq!(t.get(i, j), (10 * i + j) as f64);
                assert_eq!(t.get(j, i), t.get(i, j));
            }
        }
        t.set(0, 1, f64::INFINITY);
        assert_eq!(t.max_finite(), 34.0);
        let w = t.threshold(12.0);
        assert!(!w.get(0, 1) && w.get(0, 4) && w.get(1, 2) && !w.get(1, 3));
        assert!(t.to_dense_csv().starts_with("0,inf,2,3,4\ninf,0,12,13,14\n"));
    }
}
