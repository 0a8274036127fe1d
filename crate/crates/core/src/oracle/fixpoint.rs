use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::OracleLimits;
use crate::child_set::ChildSet;
use crate::error::{Error, Result};

/// Monomial `count * x^n * prod_s y_s^exponents[s]`, with exponents listed in
/// the order of the child set's elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointCoefficient {
    pub n: u64,
    pub exponents: Vec<u32>,
    pub count: BigInt,
}

/// Truncation of `f(x; y)` to `x^n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointGf {
    pub child_set: ChildSet,
    pub n_max: u64,
    /// `by_size[n - 1]` lists the monomials of `[x^n] f`, sorted by exponents.
    pub by_size: Vec<Vec<JointCoefficient>>,
}

impl JointGf {
    pub fn at(&self, n: u64) -> &[JointCoefficient] {
        match n.checked_sub(1) {
            Some(i) if (i as usize) < self.by_size.len() => &self.by_size[i as usize],
            _ => &[],
        }
    }

    /// `f_n`, i.e. all `y` set to 1.
    pub fn tree_count(&self, n: u64) -> BigInt {
        self.at(n).iter().map(|c| &c.count).sum()
    }
}

type Series = BTreeMap<(u64, Vec<u32>), BigInt>;

fn mul_trunc(a: &Series, b: &Series, max_x: u64) -> Series {
    let mut out = Series::new();
    for ((xa, ya), ca) in a {
        for ((xb, yb), cb) in b {
            if xa + xb > max_x {
                continue;
            }
            let y: Vec<u32> = ya.iter().zip(yb).map(|(p, q)| p + q).collect();
            *out.entry((xa + xb, y)).or_insert_with(BigInt::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn joint_gf_fixpoint(set: &ChildSet, n_max: u64) -> Result<JointGf> {
    joint_gf_fixpoint_with(set, n_max, &OracleLimits::default())
}

/// Iterates `f <- x * sum_{s in S} y_s f^s` from `f = 0`, `n_max` times.
/// Since `f` has valuation 1 in `x`, iteration `t` fixes the coefficients of
/// `x^1..x^t` for good.
pub fn joint_gf_fixpoint_with(set: &ChildSet, n_max: u64, limits: &OracleLimits) -> Result<JointGf> {
    if n_max > limits.fixpoint_max_n {
        return Err(Error::EnumerationTooLarge {
            n: n_max,
            cap: limits.fixpoint_max_n,
        });
    }
    let k = set.len();
    let one: Series = [((0u64, vec![0u32; k]), BigInt::from(1))].into_iter().collect();
    let mut f = Series::new();
    for _ in 0..n_max {
        // f^s truncated at x^(n_max - 1); the outer x restores the degree
        let mut next = Series::new();
        let mut power = one.clone();
        let mut current = 0u32;
        for (idx, &s) in set.elements().iter().enumerate() {
            while current < s {
                power = mul_trunc(&power, &f, n_max - 1);
                current += 1;
            }
            for ((x, y), c) in &power {
                let mut y = y.clone();
                y[idx] += 1;
                *next.entry((x + 1, y)).or_insert_with(BigInt::zero) += c;
            }
        }
        f = next;
    }
    let mut by_size = vec![Vec::new(); n_max as usize];
    for ((x, y), count) in f {
        by_size[x as usize - 1].push(JointCoefficient {
            n: x,
            exponents: y,
            count,
        });
    }
    Ok(JointGf {
        child_set: set.clone(),
        n_max,
        by_size,
    })
}
