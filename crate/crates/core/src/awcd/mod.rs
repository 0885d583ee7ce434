//! Adaptive weights community detection.
//!
//! Every pair of vertices `(i, j)` gets a likelihood-ratio statistic `T_ij`
//! comparing the edge densities inside and between the local communities of
//! `i` and `j`; pairs with `T_ij <= lambda` are declared to share a community.

mod algorithm;
mod counts;
mod kl;
mod matrix;

use std::fmt;
use std::str::FromStr;

pub use algorithm::{run, step, step_with_start, test_matrix, RunOutput};
pub use counts::{pair_counts, Neighborhoods, PairCounter};
pub use kl::{bernoulli_kl, estimate_thetas, test_statistic, DomainError, Thetas};
pub use matrix::{TestMatrix, WeightMatrix};

/// Which edge count feeds the test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VariantTag {
    /// Raw count of edges between the two local communities.
    Circle,
    /// Raw count minus the deterministic contribution of the edge `ij`.
    Debiased,
    /// Count restricted to the parts of each community that do not overlap
    /// the inner neighborhood of the other endpoint.
    Plus,
}

/// How the debiasing correction is gated for radius `k >= 2`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum BiasIndicator {
    /// Correct when `i` and `j` are adjacent.
    #[default]
    Edge,
    /// Correct on the diagonal `i == j` only.
    Diag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Variant {
    pub tag: VariantTag,
    pub bias: BiasIndicator,
}

impl Variant {
    pub const fn circle() -> Self {
        Variant {
            tag: VariantTag::Circle,
            bias: BiasIndicator::Edge,
        }
    }

    pub const fn debiased() -> Self {
        Variant {
            tag: VariantTag::Debiased,
            bias: BiasIndicator::Edge,
        }
    }

    pub const fn plus() -> Self {
        Variant {
            tag: VariantTag::Plus,
            bias: BiasIndicator::Edge,
        }
    }

    pub const fn with_bias(self, bias: BiasIndicator) -> Self {
        Variant { bias, ..self }
    }
}

impl From<VariantTag> for Variant {
    fn from(tag: VariantTag) -> Self {
        Variant {
            tag,
            bias: BiasIndicator::Edge,
        }
    }
}

impl fmt::Display for VariantTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VariantTag::Circle => "circle",
            VariantTag::Debiased => "debiased",
            VariantTag::Plus => "plus",
        })
    }
}

impl FromStr for VariantTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "circle" => Ok(VariantTag::Circle),
            "debiased" => Ok(VariantTag::Debiased),
            "plus" => Ok(VariantTag::Plus),
            other => Err(format!("unknown variant {other:?} (expected circle, debiased or plus)")),
        }
    }
}

impl fmt::Display for BiasIndicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BiasIndicator::Edge => "edge",
            BiasIndicator::Diag => "diag",
        })
    }
}

impl FromStr for BiasIndicator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edge" => Ok(BiasIndicator::Edge),
            "diag" => Ok(BiasIndicator::Diag),
            other => Err(format!("unknown bias indicator {other:?} (expected edge or diag)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AwcdConfig {
    /// Radius of the starting neighborhoods.
    pub k: usize,
    pub lambda: f64,
    /// Number of iterations, at least 1.
    pub l_max: usize,
    pub variant: Variant,
}

impl AwcdConfig {
    pub fn new(k: usize, lambda: f64, variant: Variant) -> Self {
        assert!(k >= 1, "radius must be positive");
        AwcdConfig {
            k,
            lambda,
            l_max: 1,
            variant,
        }
    }

    pub fn with_iterations(mut self, l_max: usize) -> Self {
        assert!(l_max >= 1, "need at least one iteration");
        self.l_max = l_max;
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }
}

/// Edge count `s` and pair count `n` between two local communities.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct CountPair {
    pub s: u64,
    pub n: u64,
}

impl CountPair {
    pub const fn new(s: u64, n: u64) -> Self {
        CountPair { s, n }
    }
}
