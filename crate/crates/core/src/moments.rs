//! Raw, central and scaled mixed moments of two child-count statistics.
//!
//! Everything is exact: raw and central moments are rationals, and a scaled
//! moment `m_{p1,p2} / (m_{2,0}^{p1/2} m_{0,2}^{p2/2})` is carried as a
//! [`Surd`], so irrational values only appear when rendered.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::child_set::ChildSet;
use crate::error::{Error, Result};
use crate::exact::{binomial, Surd};
use crate::lagrange::NumeratorEngine;

/// A pair of statistics `X_{n,s1}`, `X_{n,s2}` and the power grid of interest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentSpec {
    pub child_set: ChildSet,
    pub n: u64,
    pub s1: u32,
    pub s2: u32,
    pub max_p1: u32,
    pub max_p2: u32,
}

impl MomentSpec {
    pub fn new(child_set: ChildSet, n: u64, (s1, s2): (u32, u32), (max_p1, max_p2): (u32, u32)) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidQuery("n must be at least 1".into()));
        }
        if s1 == s2 {
            return Err(Error::InvalidQuery("s1 and s2 must differ".into()));
        }
        for s in [s1, s2] {
            if !child_set.contains(s) {
                return Err(Error::InvalidQuery(format!("{s} is not in {child_set}")));
            }
        }
        Ok(MomentSpec {
            child_set,
            n,
            s1,
            s2,
            max_p1,
            max_p2,
        })
    }

    fn with_grid(&self, p1: u32, p2: u32) -> MomentSpec {
        MomentSpec {
            max_p1: self.max_p1.max(p1),
            max_p2: self.max_p2.max(p2),
            ..self.clone()
        }
    }
}

/// A scaled mixed moment `alpha_{p1,p2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledMoment {
    pub p1: u32,
    pub p2: u32,
    pub value: Surd,
    /// Present when both powers are even, where the value is rational.
    pub exact: Option<BigRational>,
}

impl ScaledMoment {
    pub fn square(&self) -> BigRational {
        self.value.square()
    }

    pub fn render(&self, digits: u32) -> String {
        self.value.render(digits)
    }
}

/// Exact numerators `N_{a,b}` for one spec, with the moments derived from them.
#[derive(Debug, Clone)]
pub struct MomentLab {
    spec: MomentSpec,
    grid: (u32, u32),
    numerators: BTreeMap<(u32, u32), BigInt>,
}

impl MomentLab {
    /// Computes every numerator needed for powers up to the [`MomentSpec`] grid
    /// (and at least 2 in each index, for the variances).
    pub fn new(spec: &MomentSpec) -> Result<Self> {
        let g1 = spec.max_p1.max(2);
        let g2 = spec.max_p2.max(2);
        let engine = NumeratorEngine::new(&spec.child_set, spec.n, g1 + g2)?;
        let mut numerators = BTreeMap::new();
        for a in 0..=g1 {
            for b in 0..=g2 {
                numerators.insert((a, b), engine.numerator(spec.s1, Some(spec.s2), a, b)?);
            }
        }
        let lab = MomentLab {
            spec: spec.clone(),
            grid: (g1, g2),
            numerators,
        };
        if lab.tree_count().is_zero() {
            return Err(Error::NoTrees {
                set: spec.child_set.to_string(),
                n: spec.n,
            });
        }
        Ok(lab)
    }

    pub fn spec(&self) -> &MomentSpec {
        &self.spec
    }

    pub fn tree_count(&self) -> &BigInt {
        &self.numerators[&(0, 0)]
    }

    pub fn numerator(&self, p1: u32, p2: u32) -> Result<&BigInt> {
        self.numerators.get(&(p1, p2)).ok_or_else(|| {
            Error::InvalidQuery(format!(
                "power ({p1},{p2}) outside the computed grid {:?}",
                self.grid
            ))
        })
    }

    /// `E[X1^p1 X2^p2] = N_{p1,p2} / N_{0,0}`.
    pub fn raw(&self, p1: u32, p2: u32) -> Result<BigRational> {
        Ok(BigRational::new(
            self.numerator(p1, p2)?.clone(),
            self.tree_count().clone(),
        ))
    }

    /// `E[(X1 - mu1)^p1 (X2 - mu2)^p2]` from the numerators by binomial
    /// expansion, keeping the powers of `N_{0,0}` explicit.
    pub fn central(&self, p1: u32, p2: u32) -> Result<BigRational> {
        let n00 = BigRational::from_integer(self.tree_count().clone());
        let n10 = BigRational::from_integer(self.numerator(1, 0)?.clone());
        let n01 = BigRational::from_integer(self.numerator(0, 1)?.clone());
        let total = (p1 + p2) as i32;
        let mut acc = BigRational::zero();
        for r in 0..=p1 {
            for t in 0..=p2 {
                let mut term = BigRational::from_integer(binomial(p1, r) * binomial(p2, t));
                if (r + t) % 2 == 1 {
                    term = -term;
                }
                term *= n10.pow(r as i32);
                term *= n01.pow(t as i32);
                term *= n00.pow(total - (r + t) as i32 - 1);
                term *= BigRational::from_integer(self.numerator(p1 - r, p2 - t)?.clone());
                acc += term;
            }
        }
        Ok(acc / n00.pow(total))
    }

    pub fn variances(&self) -> Result<(BigRational, BigRational)> {
        Ok((self.central(2, 0)?, self.central(0, 2)?))
    }

    pub fn is_degenerate(&self) -> Result<bool> {
        let (v1, v2) = self.variances()?;
        Ok(v1.is_zero() || v2.is_zero())
    }

    /// `alpha_{p1,p2} = m_{p1,p2} / (m_{2,0}^{p1/2} m_{0,2}^{p2/2})`.
    pub fn scaled(&self, p1: u32, p2: u32) -> Result<ScaledMoment> {
        let (v1, v2) = self.variances()?;
        if v1.is_zero() || v2.is_zero() {
            return Err(Error::DegenerateVariance);
        }
        let m = self.central(p1, p2)?;
        // alpha = m / (v1^(p1 div 2) v2^(p2 div 2)) / sqrt(R) with R holding the odd halves
        let mut radicand = BigRational::one();
        if p1 % 2 == 1 {
            radicand *= &v1;
        }
        if p2 % 2 == 1 {
            radicand *= &v2;
        }
        let denom = v1.pow((p1 / 2) as i32) * v2.pow((p2 / 2) as i32) * &radicand;
        let value = Surd::new(m / denom, &radicand);
        let exact = (p1.is_multiple_of(2) && p2.is_multiple_of(2)).then(|| {
            value
                .as_rational()
                .cloned()
                .expect("even powers give a rational scaled moment")
        });
        Ok(ScaledMoment { p1, p2, value, exact })
    }

    /// `rho = alpha_{1,1}`.
    pub fn correlation(&self) -> Result<ScaledMoment> {
        self.scaled(1, 1)
    }

    pub fn report(&self, digits: u32) -> Result<MomentReport> {
        let mut raw = BTreeMap::new();
        let mut central = BTreeMap::new();
        for p1 in 0..=self.spec.max_p1 {
            for p2 in 0..=self.spec.max_p2 {
                raw.insert((p1, p2), self.raw(p1, p2)?);
                central.insert((p1, p2), self.central(p1, p2)?);
            }
        }
        let degenerate = self.is_degenerate()?;
        let mut scaled = BTreeMap::new();
        let mut correlation = None;
        if !degenerate {
            for p1 in 0..=self.spec.max_p1 {
                for p2 in 0..=self.spec.max_p2 {
                    scaled.insert((p1, p2), self.scaled(p1, p2)?);
                }
            }
            correlation = Some(self.correlation()?);
        }
        Ok(MomentReport {
            child_set: self.spec.child_set.clone(),
            n: self.spec.n,
            s1: self.spec.s1,
            s2: self.spec.s2,
            digits,
            raw,
            central,
            scaled,
            correlation,
            degenerate_variance: degenerate,
        })
    }
}

/// All moments of a [`MomentSpec`] over its power grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentReport {
    pub child_set: ChildSet,
    pub n: u64,
    pub s1: u32,
    pub s2: u32,
    pub digits: u32,
    pub raw: BTreeMap<(u32, u32), BigRational>,
    pub central: BTreeMap<(u32, u32), BigRational>,
    /// Empty when `degenerate_variance` is set.
    pub scaled: BTreeMap<(u32, u32), ScaledMoment>,
    pub correlation: Option<ScaledMoment>,
    pub degenerate_variance: bool,
}

pub fn raw_moment(spec: &MomentSpec, p1: u32, p2: u32) -> Result<BigRational> {
    MomentLab::new(&spec.with_grid(p1, p2))?.raw(p1, p2)
}

pub fn central_moment(spec: &MomentSpec, p1: u32, p2: u32) -> Result<BigRational> {
    MomentLab::new(&spec.with_grid(p1, p2))?.central(p1, p2)
}

pub fn scaled_moment(spec: &MomentSpec, p1: u32, p2: u32) -> Result<ScaledMoment> {
    MomentLab::new(&spec.with_grid(p1, p2))?.scaled(p1, p2)
}

pub fn correlation(spec: &MomentSpec) -> Result<ScaledMoment> {
    MomentLab::new(spec)?.correlation()
}

/// Raw and central moments over the [`MomentSpec`] grid; scaled entries are omitted
/// (and flagged) when a variance vanishes.
pub fn moment_report(spec: &MomentSpec, digits: u32) -> Result<MomentReport> {
    MomentLab::new(spec)?.report(digits)
}

/// Sign-aware check that `rho^2 <= 1`.
pub fn correlation_is_bounded(rho: &ScaledMoment) -> bool {
    rho.square() <= BigRational::one() && !rho.square().is_negative()
}
