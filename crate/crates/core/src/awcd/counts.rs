//! Edge and pair counts between local communities.
//!
//! [`pair_counts`] enumerates vertex pairs directly and is the reference
//! definition. [`PairCounter`] produces the same numbers for all pairs at
//! once: it tabulates `P[v][j] = |N(v) ∩ C_j|`, so that the raw count
//! `S_ij = Σ_{v ∈ C_i} P[v][j]` becomes a sum of contiguous rows, and it
//! derives the restricted counts of the plus variant by inclusion-exclusion
//! on the small overlaps with the inner neighborhoods.

use crate::bitset::BitSet;
use crate::graph::{rings_up_to, Graph, VertexSet};

use super::{BiasIndicator, CountPair, Variant, VariantTag};

/// Local communities `C_i` together with the inner neighborhoods `C_i^{k-1}`
/// they exclude (for radius 1 the inner neighborhood of `x` is `{x}`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Neighborhoods {
    k: usize,
    outer: Vec<VertexSet>,
    inner: Vec<VertexSet>,
}

impl Neighborhoods {
    /// Exact-distance rings of radius `k` and `k - 1`.
    pub fn rings(g: &Graph, k: usize) -> Self {
        let mut all = rings_up_to(g, k);
        let outer = all.pop().expect("k >= 1");
        let inner = match all.pop() {
            Some(prev) => prev,
            None => singletons(g.n_vertices()),
        };
        Neighborhoods { k, outer, inner }
    }

    /// Caller-supplied communities, counted with the radius-1 rules.
    pub fn from_sets(sets: Vec<VertexSet>) -> Self {
        let inner = singletons(sets.len());
        Neighborhoods {
            k: 1,
            outer: sets,
            inner,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.outer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outer.is_empty()
    }

    pub fn set(&self, i: usize) -> &VertexSet {
        &self.outer[i]
    }

    pub fn sets(&self) -> &[VertexSet] {
        &self.outer
    }

    pub fn inner(&self, i: usize) -> &VertexSet {
        &self.inner[i]
    }
}

fn singletons(n: usize) -> Vec<VertexSet> {
    (0..n).map(|x| VertexSet::from_unsorted(vec![x])).collect()
}

fn correction(g: &Graph, nb: &Neighborhoods, i: usize, j: usize, bias: BiasIndicator) -> u64 {
    let sizes = (nb.set(i).len() + nb.set(j).len()) as u64;
    if nb.k == 1 {
        if i != j && g.adj(i, j) {
            sizes.saturating_sub(1)
        } else {
            0
        }
    } else {
        let gate = match bias {
            BiasIndicator::Edge => i != j && g.adj(i, j),
            BiasIndicator::Diag => i == j,
        };
        if gate {
            sizes
        } else {
            0
        }
    }
}

fn circle_n(nb: &Neighborhoods, i: usize, j: usize) -> u64 {
    let (a, b) = (nb.set(i).len() as u64, nb.set(j).len() as u64);
    if i == j {
        a * b.saturating_sub(1)
    } else {
        a * b
    }
}

/// Counts for one pair by direct enumeration of vertex pairs.
pub fn pair_counts(g: &Graph, nb: &Neighborhoods, i: usize, j: usize, variant: Variant) -> CountPair {
    let (ci, cj) = (nb.set(i), nb.set(j));
    let edges_between = |a: &[usize], b: &[usize]| -> u64 {
        a.iter()
            .map(|&v1| b.iter().filter(|&&v2| g.adj(v1, v2)).count() as u64)
            .sum()
    };
    match variant.tag {
        VariantTag::Circle | VariantTag::Debiased => {
            let mut s = edges_between(ci.as_slice(), cj.as_slice());
            if variant.tag == VariantTag::Debiased {
                s = s.saturating_sub(correction(g, nb, i, j, variant.bias));
            }
            CountPair::new(s, circle_n(nb, i, j))
        }
        VariantTag::Plus => {
            let a: Vec<usize> = ci.iter().filter(|&v| !nb.inner(j).contains(v)).collect();
            let b: Vec<usize> = cj.iter().filter(|&v| !nb.inner(i).contains(v)).collect();
            let distinct = a.iter().map(|v1| b.iter().filter(|&v2| v2 != v1).count() as u64).sum();
            CountPair::new(edges_between(&a, &b), distinct)
        }
    }
}

/// All-pairs counts for one variant.
pub struct PairCounter<'a> {
    g: &'a Graph,
    nb: &'a Neighborhoods,
    variant: Variant,
    n: usize,
    /// `p[v * n + j] = |N(v) ∩ C_j|`
    p: Vec<u32>,
    /// `inverse[v]` lists every `j` with `v ∈ C_j`, ascending.
    inverse: Vec<Vec<u32>>,
    /// membership rows of the outer sets, plus variant only
    members: Vec<BitSet>,
    diag: Vec<CountPair>,
}

impl<'a> PairCounter<'a> {
    pub fn new(g: &'a Graph, nb: &'a Neighborhoods, variant: Variant) -> Self {
        let n = g.n_vertices();
        assert_eq!(nb.len(), n, "one community per vertex");
        let mut inverse = vec![Vec::new(); n];
        for (j, set) in nb.sets().iter().enumerate() {
            for v in set.iter() {
                inverse[v].push(j as u32);
            }
        }
        assert!(n < 1 << 16, "pair counts are held in u32");
        let mut p = vec![0u32; n * n];
        for v in 0..n {
            let row = &mut p[v * n..(v + 1) * n];
            for &u in g.neighbors(v) {
                for &j in &inverse[u] {
                    row[j as usize] += 1;
                }
            }
        }
        let members = if variant.tag == VariantTag::Plus {
            nb.sets().iter().map(|s| s.to_bitset(n)).collect()
        } else {
            Vec::new()
        };
        let mut counter = PairCounter {
            g,
            nb,
            variant,
            n,
            p,
            inverse,
            members,
            diag: Vec::new(),
        };
        counter.diag = (0..n)
            .map(|i| {
                let s = counter.raw_count(i, i);
                counter.finish(i, i, s, nb.set(i).len() as u64)
            })
            .collect();
        counter
    }

    #[inline]
    fn p(&self, v: usize, j: usize) -> u64 {
        self.p[v * self.n + j] as u64
    }

    fn raw_count(&self, i: usize, j: usize) -> u64 {
        self.nb.set(i).iter().map(|v| self.p(v, j)).sum()
    }

    /// Applies the variant's rule to the raw count `s` between `C_i` and
    /// `C_j`; `overlap` is `|C_i ∩ C_j|` (only read by the plus variant).
    fn finish(&self, i: usize, j: usize, s: u64, overlap: u64) -> CountPair {
        match self.variant.tag {
            VariantTag::Circle => CountPair::new(s, circle_n(self.nb, i, j)),
            VariantTag::Debiased => {
                let corr = correction(self.g, self.nb, i, j, self.variant.bias);
                CountPair::new(s.saturating_sub(corr), circle_n(self.nb, i, j))
            }
            VariantTag::Plus => self.finish_plus(i, j, s, overlap),
        }
    }

    fn finish_plus(&self, i: usize, j: usize, s: u64, overlap: u64) -> CountPair {
        // X = C_i ∩ inner(j) and Y = C_j ∩ inner(i) are what the restriction removes
        let x: Vec<usize> = self
            .nb
            .inner(j)
            .iter()
            .filter(|&v| self.members[i].contains(v))
            .collect();
        let y: Vec<usize> = self
            .nb
            .inner(i)
            .iter()
            .filter(|&v| self.members[j].contains(v))
            .collect();
        let removed_x: u64 = x.iter().map(|&v| self.p(v, j)).sum();
        let removed_y: u64 = y.iter().map(|&v| self.p(v, i)).sum();
        let both: u64 = x
            .iter()
            .map(|&v1| y.iter().filter(|&&v2| self.g.adj(v1, v2)).count() as u64)
            .sum();
        let s = s + both - removed_x - removed_y;

        let a = self.nb.set(i).len() as u64 - x.len() as u64;
        let b = self.nb.set(j).len() as u64 - y.len() as u64;
        // common members of C_i and C_j that survive both restrictions
        let mut dropped: Vec<usize> = x
            .iter()
            .copied()
            .filter(|&v| self.members[j].contains(v))
            .chain(y.iter().copied().filter(|&v| self.members[i].contains(v)))
            .collect();
        dropped.sort_unstable();
        dropped.dedup();
        let shared = overlap - dropped.len() as u64;
        CountPair::new(s, a * b - shared)
    }

    pub fn diag(&self, i: usize) -> CountPair {
        self.diag[i]
    }

    /// Counts for a single pair.
    pub fn counts(&self, i: usize, j: usize) -> CountPair {
        if i == j {
            return self.diag[i];
        }
        let s = self.raw_count(i, j);
        let overlap = if self.variant.tag == VariantTag::Plus {
            self.nb.set(i).iter().filter(|&v| self.members[j].contains(v)).count() as u64
        } else {
            0
        };
        self.finish(i, j, s, overlap)
    }

    /// Calls `f(i, j, counts)` for every pair `i < j`, row by row.
    pub fn for_each_upper(&self, mut f: impl FnMut(usize, usize, CountPair)) {
        let n = self.n;
        let plus = self.variant.tag == VariantTag::Plus;
        let mut acc = vec![0u32; n];
        let mut overlap = vec![0u32; if plus { n } else { 0 }];
        for i in 0..n {
            let lo = i + 1;
            acc[lo..].fill(0);
            for v in self.nb.set(i).iter() {
                let src = &self.p[v * n + lo..(v + 1) * n];
                // Sums are bounded by n^2 < 2^32 (checked in `new`); wrapping
                // keeps the loop vectorized when overflow checks are on.
                for (a, &b) in acc[lo..].iter_mut().zip(src) {
                    *a = a.wrapping_add(b);
                }
            }
            if plus {
                overlap[lo..].fill(0);
                for v in self.nb.set(i).iter() {
                    for &j in &self.inverse[v] {
                        if j as usize >= lo {
                            overlap[j as usize] += 1;
                        }
                    }
                }
            }
            for j in lo..n {
                let ov = if plus { overlap[j] as u64 } else { 0 };
                f(i, j, self.finish(i, j, acc[j] as u64, ov));
            }
        }
    }
}
