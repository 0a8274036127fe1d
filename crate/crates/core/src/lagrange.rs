//! Tree counts and moment numerators by Lagrange inversion.
//!
//! For trees with child counts in `S` the generating function satisfies
//! `f = x * Phi(f)` with `Phi(z; y) = sum_{s in S} y_s z^s`, so
//! `[x^n] f = (1/n) [z^(n-1)] Phi^n`. Marking vertices with `s` children is
//! the operator `y_s d/dy_s`. Writing `u = y_s z^s`, its `p`-th power
//! expands through Stirling numbers of the second kind:
//!
//! ```text
//! (u d/du)^p Phi^n = sum_k S(p, k) (n)_k u^k Phi^(n-k)
//! ```
//!
//! Two distinct child counts act on independent variables, which gives
//!
//! ```text
//! N_{p1,p2}(n) = (1/n) sum_{k1, k2} S(p1,k1) S(p2,k2) (n)_{k1+k2}
//!                 [z^(n-1-k1 s1-k2 s2)] phi^(n-k1-k2)
//! ```
//!
//! with every `y` set to 1 afterwards.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::child_set::ChildSet;
use crate::error::{Error, Result};
use crate::exact::{falling_factorial, stirling2_row};
use crate::poly::{poly_pow_coeffs, DensePolynomial};

/// Number of trees on `n` vertices with every child count in `set`.
/// Zero when no such tree exists (including `n = 0`).
pub fn count_trees(set: &ChildSet, n: u64) -> BigInt {
    if n == 0 {
        return BigInt::zero();
    }
    let c = poly_pow_coeffs(&set.phi(), n, n as usize - 1)
        .expect("phi has constant term 1")
        .coeff(n as usize - 1);
    let (q, r) = c.div_rem(&BigInt::from(n));
    assert!(r.is_zero(), "Lagrange coefficient not divisible by n");
    q
}

/// Parameters of one numerator `N_{p1,p2}(X_{n,s1}, X_{n,s2})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumeratorQuery {
    pub child_set: ChildSet,
    pub n: u64,
    pub s1: u32,
    pub s2: Option<u32>,
    pub p1: u32,
    pub p2: u32,
}

impl NumeratorQuery {
    /// Single-statistic query `N_p(X_{n,s})`.
    pub fn single(child_set: ChildSet, n: u64, s: u32, p: u32) -> Self {
        NumeratorQuery {
            child_set,
            n,
            s1: s,
            s2: None,
            p1: p,
            p2: 0,
        }
    }

    pub fn mixed(child_set: ChildSet, n: u64, (s1, s2): (u32, u32), (p1, p2): (u32, u32)) -> Self {
        NumeratorQuery {
            child_set,
            n,
            s1,
            s2: Some(s2),
            p1,
            p2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidQuery("n must be at least 1".into()));
        }
        validate_indices(&self.child_set, self.s1, self.s2, self.p1, self.p2)
    }
}

fn validate_indices(set: &ChildSet, s1: u32, s2: Option<u32>, p1: u32, p2: u32) -> Result<()> {
    if !set.contains(s1) {
        return Err(Error::InvalidQuery(format!("s1 = {s1} is not in {set}")));
    }
    match s2 {
        Some(s2) if !set.contains(s2) => {
            Err(Error::InvalidQuery(format!("s2 = {s2} is not in {set}")))
        }
        Some(s2) if s2 == s1 && p1 > 0 && p2 > 0 => Err(Error::InvalidQuery(format!(
            "s1 = s2 = {s1} with both powers positive; merge the powers onto one index"
        ))),
        None if p2 > 0 => Err(Error::InvalidQuery("p2 > 0 requires s2".into())),
        _ => Ok(()),
    }
}

/// Truncated powers `phi^(n-k)` for `k = 0..=max_total_power`, shared by every
/// numerator at a fixed `n`.
#[derive(Debug, Clone)]
pub struct NumeratorEngine {
    child_set: ChildSet,
    n: u64,
    powers: Vec<DensePolynomial>,
}

impl NumeratorEngine {
    pub fn new(child_set: &ChildSet, n: u64, max_total_power: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidQuery("n must be at least 1".into()));
        }
        let phi = child_set.phi();
        let kmax = (max_total_power as u64).min(n);
        let powers = (0..=kmax)
            .map(|k| poly_pow_coeffs(&phi, n - k, n as usize - 1))
            .collect::<Result<Vec<_>>>()?;
        Ok(NumeratorEngine {
            child_set: child_set.clone(),
            n,
            powers,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn child_set(&self) -> &ChildSet {
        &self.child_set
    }

    pub fn tree_count(&self) -> BigInt {
        self.numerator(0, None, 0, 0).expect("N_{0,0} is always valid")
    }

    /// `N_{p1,p2}`; powers beyond the engine's `max_total_power` are computed
    /// on the fly.
    pub fn numerator(&self, s1: u32, s2: Option<u32>, p1: u32, p2: u32) -> Result<BigInt> {
        validate_indices(&self.child_set, s1, s2, p1, p2)?;
        let n = self.n;
        let n_big = BigInt::from(n);
        let s2 = s2.unwrap_or(0);
        let row1 = stirling2_row(p1);
        let row2 = stirling2_row(p2);
        let phi = self.child_set.phi();
        let mut extra: BTreeMap<usize, DensePolynomial> = BTreeMap::new();
        let mut total = BigInt::zero();
        for (k1, st1) in row1.iter().enumerate() {
            if st1.is_zero() {
                continue;
            }
            for (k2, st2) in row2.iter().enumerate() {
                if st2.is_zero() {
                    continue;
                }
                let k = k1 + k2;
                if k as u64 > n {
                    continue;
                }
                let shift = k1 as u64 * s1 as u64 + k2 as u64 * s2 as u64;
                let Some(deg) = (n - 1).checked_sub(shift) else {
                    continue;
                };
                let power = match self.powers.get(k) {
                    Some(p) => p,
                    None => extra.entry(k).or_insert(poly_pow_coeffs(
                        &phi,
                        n - k as u64,
                        n as usize - 1,
                    )?),
                };
                let Some(c) = power.coeff_ref(deg as usize) else {
                    continue;
                };
                if c.is_zero() {
                    continue;
                }
                total += st1 * st2 * falling_factorial(&n_big, k as u32) * c;
            }
        }
        let (q, r) = total.div_rem(&n_big);
        if !r.is_zero() || q.is_negative() {
            return Err(Error::Internal(format!(
                "numerator at n = {n} is not a nonnegative integer"
            )));
        }
        Ok(q)
    }
}

/// `N_{p1,p2}(X_{n,s1}, X_{n,s2})`: the sum over all trees on `n` vertices of
/// `X_{s1}^p1 * X_{s2}^p2`.
pub fn numerator_mixed(q: &NumeratorQuery) -> Result<BigInt> {
    q.validate()?;
    NumeratorEngine::new(&q.child_set, q.n, q.p1 + q.p2)?.numerator(q.s1, q.s2, q.p1, q.p2)
}

/// `(n, p1, p2)`.
pub type GridKey = (u64, u32, u32);

/// Exact numerators indexed by `(n, p1, p2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumeratorTable {
    pub child_set: ChildSet,
    pub s1: u32,
    pub s2: Option<u32>,
    pub n_range: RangeInclusive<u64>,
    pub max_p1: u32,
    pub max_p2: u32,
    pub method: &'static str,
    pub values: BTreeMap<GridKey, BigInt>,
}

impl NumeratorTable {
    pub fn get(&self, n: u64, p1: u32, p2: u32) -> Option<&BigInt> {
        self.values.get(&(n, p1, p2))
    }

    /// The sequence `N_{p1,p2}(n)` over the table's `n` range.
    pub fn column(&self, p1: u32, p2: u32) -> Vec<BigInt> {
        self.n_range
            .clone()
            .filter_map(|n| self.get(n, p1, p2).cloned())
            .collect()
    }
}

/// `N_{p1,p2}(n)` for `n = 1..=n_max`.
pub fn numerator_sequence(
    set: &ChildSet,
    s1: u32,
    s2: Option<u32>,
    p1: u32,
    p2: u32,
    n_max: u64,
) -> Result<NumeratorTable> {
    if n_max == 0 {
        return Err(Error::InvalidQuery("n_max must be at least 1".into()));
    }
    validate_indices(set, s1, s2, p1, p2)?;
    let rows: Vec<BigInt> = (1..=n_max)
        .into_par_iter()
        .map(|n| NumeratorEngine::new(set, n, p1 + p2)?.numerator(s1, s2, p1, p2))
        .collect::<Result<_>>()?;
    Ok(NumeratorTable {
        child_set: set.clone(),
        s1,
        s2,
        n_range: 1..=n_max,
        max_p1: p1,
        max_p2: p2,
        method: "lagrange",
        values: rows
            .into_iter()
            .enumerate()
            .map(|(i, v)| ((i as u64 + 1, p1, p2), v))
            .collect(),
    })
}

/// Every `N_{a,b}` with `a <= max_p1`, `b <= max_p2` over an `n` range.
pub fn numerator_grid(
    set: &ChildSet,
    (s1, s2): (u32, Option<u32>),
    n_range: RangeInclusive<u64>,
    max_p1: u32,
    max_p2: u32,
) -> Result<NumeratorTable> {
    validate_indices(set, s1, s2, max_p1.min(1), max_p2.min(1))?;
    if s2.is_none() && max_p2 > 0 {
        return Err(Error::InvalidQuery("p2 > 0 requires s2".into()));
    }
    if *n_range.start() == 0 {
        return Err(Error::InvalidQuery("n must be at least 1".into()));
    }
    let ns: Vec<u64> = n_range.clone().collect();
    let per_n: Vec<Vec<(GridKey, BigInt)>> = ns
        .into_par_iter()
        .map(|n| {
            let engine = NumeratorEngine::new(set, n, max_p1 + max_p2)?;
            let mut out = Vec::new();
            for a in 0..=max_p1 {
                for b in 0..=max_p2 {
                    out.push(((n, a, b), engine.numerator(s1, s2, a, b)?));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(NumeratorTable {
        child_set: set.clone(),
        s1,
        s2,
        n_range,
        max_p1,
        max_p2,
        method: "lagrange",
        values: per_n.into_iter().flatten().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(e: &[u32]) -> ChildSet {
        ChildSet::new(e.iter().copied()).unwrap()
    }

    fn big(v: u64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn tree_counts() {
        let s = set(&[0, 1, 2]);
        assert_eq!(count_trees(&s, 30), big(593742784829));
        assert_eq!(count_trees(&s, 1), big(1));
        assert_eq!(count_trees(&s, 2), big(1));
        assert_eq!(count_trees(&set(&[0, 2]), 4), big(0));
        assert_eq!(count_trees(&set(&[0, 2]), 7), big(5));
        assert_eq!(count_trees(&set(&[0]), 1), big(1));
        assert_eq!(count_trees(&set(&[0]), 2), big(0));
        assert_eq!(count_trees(&s, 0), big(0));
    }

    #[test]
    fn thirty_vertex_numerators() {
        let s = set(&[0, 1, 2]);
        let q = |s1, s2, p1, p2| NumeratorQuery {
            child_set: s.clone(),
            n: 30,
            s1,
            s2,
            p1,
            p2,
        };
        assert_eq!(numerator_mixed(&q(0, None, 1, 0)).unwrap(), big(6186675630819));
        assert_eq!(numerator_mixed(&q(1, None, 1, 0)).unwrap(), big(6032675068061));
        assert_eq!(
            numerator_mixed(&q(0, Some(1), 2, 3)).unwrap(),
            big(68622906286794431)
        );
    }

    #[test]
    fn three_vertex_numerators() {
        let s = set(&[0, 1, 2]);
        assert_eq!(
            numerator_mixed(&NumeratorQuery::single(s.clone(), 3, 0, 2)).unwrap(),
            big(5)
        );
        assert_eq!(
            numerator_mixed(&NumeratorQuery::mixed(s, 3, (0, 1), (1, 1))).unwrap(),
            big(2)
        );
    }

    #[test]
    fn sequences() {
        let s = set(&[0, 1, 2]);
        let t = numerator_sequence(&s, 0, None, 1, 0, 3).unwrap();
        assert_eq!(t.column(1, 0), vec![big(1), big(1), big(3)]);
        let t = numerator_sequence(&s, 1, None, 1, 0, 3).unwrap();
        assert_eq!(t.column(1, 0), vec![big(0), big(1), big(2)]);
        let t = numerator_sequence(&s, 0, Some(1), 0, 0, 5).unwrap();
        assert_eq!(t.column(0, 0), [1, 1, 2, 4, 9].map(big).to_vec());
    }

    #[test]
    fn grid_agrees_with_single_queries() {
        let s = set(&[0, 1, 3]);
        let g = numerator_grid(&s, (0, Some(3)), 1..=9, 2, 2).unwrap();
        for n in 1..=9 {
            assert_eq!(g.get(n, 0, 0).unwrap(), &count_trees(&s, n));
            for a in 0..=2 {
                for b in 0..=2 {
                    let q = NumeratorQuery::mixed(s.clone(), n, (0, 3), (a, b));
                    assert_eq!(g.get(n, a, b).unwrap(), &numerator_mixed(&q).unwrap());
                }
            }
        }
    }

    #[test]
    fn invalid_queries() {
        let s = set(&[0, 1, 2]);
        let e = numerator_mixed(&NumeratorQuery::mixed(s.clone(), 5, (1, 1), (1, 2)));
        assert!(matches!(e, Err(Error::InvalidQuery(_))));
        let e = numerator_mixed(&NumeratorQuery::single(s.clone(), 5, 3, 1));
        assert!(matches!(e, Err(Error::InvalidQuery(_))));
        let e = numerator_mixed(&NumeratorQuery::single(s.clone(), 0, 0, 1));
        assert!(matches!(e, Err(Error::InvalidQuery(_))));
        // same index with one power zero is harmless
        let ok = numerator_mixed(&NumeratorQuery::mixed(s, 5, (1, 1), (2, 0))).unwrap();
        assert!(ok > big(0));
    }

    #[test]
    fn vertex_and_edge_identities() {
        for e in [&[0u32, 1, 2][..], &[0, 2], &[0, 1, 3], &[0, 2, 3], &[0, 1, 2, 3]] {
            let s = set(e);
            for n in 1..=40u64 {
                let engine = NumeratorEngine::new(&s, n, 1).unwrap();
                let f = engine.tree_count();
                let mut vertices = BigInt::zero();
                let mut edges = BigInt::zero();
                for &c in s.elements() {
                    let v = engine.numerator(c, None, 1, 0).unwrap();
                    edges += &v * c;
                    vertices += v;
                }
                assert_eq!(vertices, &f * n);
                assert_eq!(edges, &f * (n - 1));
            }
        }
    }

    #[test]
    fn crude_upper_bound() {
        let s = set(&[0, 1, 2, 3]);
        for n in 1..=15u64 {
            let engine = NumeratorEngine::new(&s, n, 4).unwrap();
            let f = engine.tree_count();
            for (a, b) in [(1, 0), (2, 1), (1, 3), (0, 4), (2, 2)] {
                let v = engine.numerator(2, Some(3), a, b).unwrap();
                assert!(v <= &f * BigInt::from(n).pow(a + b));
            }
        }
    }
}
