//! Mixed moments of a standard bivariate normal pair, and the comparison of
//! tree statistics against them.
//!
//! For unit-variance `(X, Y)` with correlation `rho`, Stein's identity gives
//!
//! ```text
//! M(p1, p2) = (p1 - 1) M(p1 - 2, p2) + rho p2 M(p1 - 1, p2 - 1)
//! ```
//!
//! with `M(0, 0) = 1`. Each `M(p1, p2)` is a polynomial in `rho` with integer
//! coefficients.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::Surd;
use crate::moments::{MomentLab, MomentSpec};

/// `M(p1, p2)` as a polynomial in `rho`; `coeffs[k]` multiplies `rho^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalMomentPoly {
    pub p1: u32,
    pub p2: u32,
    coeffs: Vec<BigInt>,
}

impl NormalMomentPoly {
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Value at `rho = 1`, where the pair coincides.
    pub fn at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Exact value at `rho`.
    ///
    /// All nonzero terms share the parity of `p1`, so the result is rational
    /// for even `p1` and a rational multiple of `rho` otherwise.
    pub fn eval(&self, rho: &Surd) -> Surd {
        let rho_sq = rho.square();
        let mut even = BigRational::zero();
        let mut odd = BigRational::zero();
        let mut sq_pow = BigRational::one();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k >= 2 && k % 2 == 0 {
                sq_pow *= &rho_sq;
            }
            if c.is_zero() {
                continue;
            }
            let term = BigRational::from_integer(c.clone()) * &sq_pow;
            if k % 2 == 0 {
                even += term;
            } else {
                odd += term;
            }
        }
        debug_assert!(even.is_zero() || odd.is_zero());
        if odd.is_zero() {
            Surd::from_rational(even)
        } else {
            rho.scale(&odd)
        }
    }
}

impl std::fmt::Display for NormalMomentPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (k, a == BigInt::one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "rho")?,
                (1, false) => write!(f, "{a}*rho")?,
                (_, true) => write!(f, "rho^{k}")?,
                (_, false) => write!(f, "{a}*rho^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Every `M(a, b)` with `a <= max_p1`, `b <= max_p2`, built bottom-up.
#[derive(Debug, Clone)]
pub struct NormalMomentTable {
    max_p1: u32,
    max_p2: u32,
    cells: BTreeMap<(u32, u32), Vec<BigInt>>,
}

impl NormalMomentTable {
    pub fn new(max_p1: u32, max_p2: u32) -> Self {
        let side = max_p1.max(max_p2);
        let mut cells: BTreeMap<(u32, u32), Vec<BigInt>> = BTreeMap::new();
        for a in 0..=side {
            for b in 0..=side {
                let v = match (a, b) {
                    (0, 0) => vec![BigInt::one()],
                    // Stein's identity on the second coordinate
                    (0, b) => scale(b.checked_sub(2).and_then(|c| cells.get(&(0, c))), b as i64 - 1),
                    (a, b) => {
                        let mut v = scale(a.checked_sub(2).and_then(|c| cells.get(&(c, b))), a as i64 - 1);
                        if b >= 1 {
                            add_shifted(&mut v, &scale(cells.get(&(a - 1, b - 1)), b as i64));
                        }
                        v
                    }
                };
                cells.insert((a, b), trim(v));
            }
        }
        cells.retain(|&(a, b), _| a <= max_p1 && b <= max_p2);
        NormalMomentTable {
            max_p1,
            max_p2,
            cells,
        }
    }

    pub fn get(&self, p1: u32, p2: u32) -> Option<NormalMomentPoly> {
        self.cells.get(&(p1, p2)).map(|c| NormalMomentPoly {
            p1,
            p2,
            coeffs: c.clone(),
        })
    }

    pub fn bounds(&self) -> (u32, u32) {
        (self.max_p1, self.max_p2)
    }
}

fn scale(v: Option<&Vec<BigInt>>, factor: i64) -> Vec<BigInt> {
    match v {
        Some(v) if factor != 0 => v.iter().map(|c| c * factor).collect(),
        _ => Vec::new(),
    }
}

/// `v += rho * w`
fn add_shifted(v: &mut Vec<BigInt>, w: &[BigInt]) {
    if v.len() < w.len() + 1 {
        v.resize(w.len() + 1, BigInt::zero());
    }
    for (k, c) in w.iter().enumerate() {
        v[k + 1] += c;
    }
}

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

/// `M(p1, p2)` as a polynomial in `rho`.
pub fn normal_mixed_moment_poly(p1: u32, p2: u32) -> NormalMomentPoly {
    NormalMomentTable::new(p1, p2)
        .get(p1, p2)
        .expect("table covers its own bounds")
}

/// `M(p1, p2)` at `rho = sign * sqrt(rho_squared)`.
pub fn normal_mixed_moment_eval(
    p1: u32,
    p2: u32,
    rho_squared: &BigRational,
    rho_negative: bool,
) -> Result<Surd> {
    if rho_squared > &BigRational::one() || rho_squared.is_negative() {
        return Err(Error::InvalidCorrelation(rho_squared.to_string()));
    }
    let rho = Surd::signed_sqrt(rho_negative, rho_squared);
    Ok(normal_mixed_moment_poly(p1, p2).eval(&rho))
}

/// One row of a normality-gap table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapRow {
    pub p1: u32,
    pub p2: u32,
    /// Scaled mixed moment of the tree statistics.
    pub scaled: Surd,
    /// Bivariate normal moment at the empirical correlation.
    pub reference: Surd,
    /// `scaled - reference`.
    pub gap: Surd,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    pub spec: MomentSpec,
    pub rho: Surd,
    pub rows: Vec<GapRow>,
}

impl GapReport {
    pub fn row(&self, p1: u32, p2: u32) -> Option<&GapRow> {
        self.rows.iter().find(|r| r.p1 == p1 && r.p2 == p2)
    }
}

/// Compares `alpha_{p1,p2}` with `M(p1, p2)` at `rho = alpha_{1,1}` over the
/// [`MomentSpec`] power grid.
pub fn normality_gap_report(spec: &MomentSpec) -> Result<GapReport> {
    let lab = MomentLab::new(spec)?;
    normality_gap_report_from(&lab)
}

pub fn normality_gap_report_from(lab: &MomentLab) -> Result<GapReport> {
    let spec = lab.spec();
    let rho = lab.correlation()?.value;
    let table = NormalMomentTable::new(spec.max_p1, spec.max_p2);
    let mut rows = Vec::new();
    for p1 in 0..=spec.max_p1 {
        for p2 in 0..=spec.max_p2 {
            let scaled = lab.scaled(p1, p2)?.value;
            let reference = table.get(p1, p2).expect("grid cell").eval(&rho);
            // alpha and the reference share the quadratic field Q(sqrt(m20 m02))
            let gap = scaled.checked_sub(&reference).ok_or_else(|| {
                Error::Internal(format!("gap at ({p1},{p2}) left the quadratic field"))
            })?;
            rows.push(GapRow {
                p1,
                p2,
                scaled,
                reference,
                gap,
            });
        }
    }
    Ok(GapReport {
        spec: spec.clone(),
        rho,
        rows,
    })
}
