use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{OracleLimits, TreeCode};
use crate::child_set::ChildSet;
use crate::error::{Error, Result};

fn check_cap(n: u64, limits: &OracleLimits) -> Result<()> {
    if n > limits.enumeration_max_n {
        return Err(Error::EnumerationTooLarge {
            n,
            cap: limits.enumeration_max_n,
        });
    }
    Ok(())
}

/// Visits every tree on `n` vertices in lexicographic order of its code.
pub fn for_each_tree(
    set: &ChildSet,
    n: u64,
    limits: &OracleLimits,
    mut visit: impl FnMut(&[u32]),
) -> Result<()> {
    check_cap(n, limits)?;
    if n == 0 {
        return Ok(());
    }
    let mut prefix = Vec::with_capacity(n as usize);
    extend(set.elements(), n as usize, 1, &mut prefix, &mut visit);
    Ok(())
}

// `open` counts subtrees still to be written; each remaining vertex closes at
// most one of them.
fn extend(choices: &[u32], n: usize, open: usize, prefix: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
    let remaining_after = n - prefix.len() - 1;
    for &c in choices {
        let next_open = open - 1 + c as usize;
        if remaining_after == 0 {
            if next_open == 0 {
                prefix.push(c);
                visit(prefix);
                prefix.pop();
            }
            continue;
        }
        if next_open == 0 || next_open > remaining_after {
            continue;
        }
        prefix.push(c);
        extend(choices, n, next_open, prefix, visit);
        prefix.pop();
    }
}

pub fn enumerate_trees(set: &ChildSet, n: u64) -> Result<Vec<TreeCode>> {
    enumerate_trees_with(set, n, &OracleLimits::default())
}

pub fn enumerate_trees_with(set: &ChildSet, n: u64, limits: &OracleLimits) -> Result<Vec<TreeCode>> {
    let mut out = Vec::new();
    for_each_tree(set, n, limits, |c| out.push(TreeCode(c.to_vec())))?;
    Ok(out)
}

fn count_of(code: &[u32], s: u32) -> u64 {
    code.iter().filter(|&&c| c == s).count() as u64
}

/// Direct summation of `X_{s1}^p1 X_{s2}^p2` over all trees on `n` vertices.
pub fn oracle_numerator(
    set: &ChildSet,
    n: u64,
    (s1, s2): (u32, Option<u32>),
    (p1, p2): (u32, u32),
    limits: &OracleLimits,
) -> Result<BigInt> {
    let mut total = BigInt::zero();
    for_each_tree(set, n, limits, |code| {
        let x1 = BigInt::from(count_of(code, s1)).pow(p1);
        let x2 = match s2 {
            Some(s2) => BigInt::from(count_of(code, s2)).pow(p2),
            None => BigInt::one(),
        };
        total += x1 * x2;
    })?;
    Ok(total)
}

/// Joint distribution of the child-count vector over all trees on `n`
/// vertices, tallied in one enumeration pass.
#[derive(Debug, Clone)]
pub struct TreeCensus {
    child_set: ChildSet,
    n: u64,
    /// Counts `(X_s)_{s in S}` -> number of trees.
    histogram: BTreeMap<Vec<u64>, u64>,
}

impl TreeCensus {
    pub fn new(set: &ChildSet, n: u64, limits: &OracleLimits) -> Result<Self> {
        let mut histogram = BTreeMap::new();
        for_each_tree(set, n, limits, |code| {
            let key: Vec<u64> = set.elements().iter().map(|&s| count_of(code, s)).collect();
            *histogram.entry(key).or_insert(0) += 1;
        })?;
        Ok(TreeCensus {
            child_set: set.clone(),
            n,
            histogram,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn tree_count(&self) -> BigInt {
        self.histogram.values().map(|&m| BigInt::from(m)).sum()
    }

    pub fn histogram(&self) -> &BTreeMap<Vec<u64>, u64> {
        &self.histogram
    }

    fn index(&self, s: u32) -> Result<usize> {
        self.child_set
            .index_of(s)
            .ok_or_else(|| Error::InvalidQuery(format!("{s} is not in {}", self.child_set)))
    }

    pub fn numerator(&self, s1: u32, s2: u32, p1: u32, p2: u32) -> Result<BigInt> {
        let (i, j) = (self.index(s1)?, self.index(s2)?);
        Ok(self
            .histogram
            .iter()
            .map(|(x, &m)| BigInt::from(x[i]).pow(p1) * BigInt::from(x[j]).pow(p2) * m)
            .sum())
    }

    /// `E[(X1 - mu1)^p1 (X2 - mu2)^p2]` by direct averaging over trees.
    pub fn central_moment(&self, s1: u32, s2: u32, p1: u32, p2: u32) -> Result<BigRational> {
        let (i, j) = (self.index(s1)?, self.index(s2)?);
        let f = self.tree_count();
        if f.is_zero() {
            return Err(Error::NoTrees {
                set: self.child_set.to_string(),
                n: self.n,
            });
        }
        let mean = |k: usize| -> BigRational {
            let s: BigInt = self.histogram.iter().map(|(x, &m)| BigInt::from(x[k]) * m).sum();
            BigRational::new(s, f.clone())
        };
        let (mu1, mu2) = (mean(i), mean(j));
        let mut acc = BigRational::zero();
        for (x, &m) in &self.histogram {
            let d1 = BigRational::from_integer(x[i].into()) - &mu1;
            let d2 = BigRational::from_integer(x[j].into()) - &mu2;
            acc += d1.pow(p1 as i32) * d2.pow(p2 as i32) * BigRational::from_integer(m.into());
        }
        Ok(acc / BigRational::from_integer(f))
    }
}

pub fn oracle_central_moment(
    set: &ChildSet,
    n: u64,
    (s1, s2): (u32, u32),
    (p1, p2): (u32, u32),
    limits: &OracleLimits,
) -> Result<BigRational> {
    TreeCensus::new(set, n, limits)?.central_moment(s1, s2, p1, p2)
}
