//! Independent ground truth for small trees.
//!
//! Nothing here goes through Lagrange inversion: trees are listed directly as
//! Łukasiewicz words, the joint generating function is obtained by iterating
//! its functional equation, and the sampler uses subtree counts built from
//! the recursive decomposition of a tree into its root and subtrees.

mod enumerate;
mod fixpoint;
mod sample;

use std::fmt;
use std::str::FromStr;

pub use enumerate::{
    enumerate_trees, enumerate_trees_with, for_each_tree, oracle_central_moment, oracle_numerator,
    TreeCensus,
};
pub use fixpoint::{joint_gf_fixpoint, joint_gf_fixpoint_with, JointCoefficient, JointGf};
pub use sample::{monte_carlo_moment, sample_tree_uniform, MonteCarloEstimate, UniformSampler};

use crate::error::Error;

/// Soft caps for the exponential-cost computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub enumeration_max_n: u64,
    pub fixpoint_max_n: u64,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            enumeration_max_n: 18,
            fixpoint_max_n: 30,
        }
    }
}

/// A tree as its preorder sequence of child counts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeCode(pub Vec<u32>);

impl TreeCode {
    /// Partial sums of `c_i - 1` stay nonnegative before the end and total -1.
    pub fn is_valid(&self) -> bool {
        is_lukasiewicz(&self.0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of vertices with exactly `s` children.
    pub fn count(&self, s: u32) -> u64 {
        self.0.iter().filter(|&&c| c == s).count() as u64
    }

    pub fn child_counts(&self) -> &[u32] {
        &self.0
    }
}

pub fn is_lukasiewicz(code: &[u32]) -> bool {
    let mut height: i64 = 0;
    for (i, &c) in code.iter().enumerate() {
        height += c as i64 - 1;
        let last = i + 1 == code.len();
        if (last && height != -1) || (!last && height < 0) {
            return false;
        }
    }
    !code.is_empty()
}

impl fmt::Display for TreeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for TreeCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let code = s
            .split_whitespace()
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| Error::InvalidQuery(format!("bad child count {t:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let code = TreeCode(code);
        if !code.is_valid() {
            return Err(Error::InvalidQuery(format!("{s:?} is not a valid tree code")));
        }
        Ok(code)
    }
}
