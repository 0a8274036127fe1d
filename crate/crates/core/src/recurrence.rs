//! Guessing and checking P-recursive recurrences.
//!
//! A recurrence of order `r` is stored in backward form
//!
//! ```text
//! q_0(n) a(n) + q_1(n) a(n-1) + ... + q_r(n) a(n-r) = 0
//! ```
//!
//! with integer polynomial coefficients. Guessing solves the homogeneous
//! linear system for the unknown coefficients by fraction-free elimination,
//! trying orders and then degrees in increasing order, and checks every
//! candidate on terms that were held out of the fit.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Terms `a(start), a(start + 1), ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    pub start: i64,
    pub terms: Vec<BigInt>,
}

impl Sequence {
    pub fn new(start: i64, terms: Vec<BigInt>) -> Self {
        Sequence { start, terms }
    }

    pub fn get(&self, n: i64) -> Option<&BigInt> {
        usize::try_from(n - self.start)
            .ok()
            .and_then(|i| self.terms.get(i))
    }

    /// Index of the last term.
    pub fn end(&self) -> i64 {
        self.start + self.terms.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

fn eval(poly: &[BigInt], n: i64) -> BigInt {
    let x = BigInt::from(n);
    poly.iter().rev().fold(BigInt::zero(), |acc, c| acc * &x + c)
}

fn trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recurrence {
    /// `coeffs[j]` multiplies `a(n - j)`; each is listed by ascending power of `n`.
    coeffs: Vec<Vec<BigInt>>,
    /// Inclusive range of `n` on which the relation was checked.
    pub verified_range: Option<(i64, i64)>,
}

impl Recurrence {
    /// Canonical form: the content of all coefficients is removed and the
    /// leading coefficient of `q_0` is made positive.
    pub fn new(coeffs: Vec<Vec<BigInt>>) -> Result<Self> {
        let mut coeffs: Vec<Vec<BigInt>> = coeffs.into_iter().map(trim).collect();
        if coeffs.len() < 2 || coeffs.iter().all(Vec::is_empty) {
            return Err(Error::InvalidQuery("recurrence needs order >= 1 and a nonzero coefficient".into()));
        }
        if coeffs[0].is_empty() {
            return Err(Error::InvalidQuery("q_0 must not vanish identically".into()));
        }
        let content = coeffs
            .iter()
            .flatten()
            .fold(BigInt::zero(), |g, c| g.gcd(c));
        let flip = coeffs[0].last().is_some_and(Signed::is_negative);
        for p in &mut coeffs {
            for c in p.iter_mut() {
                *c = &*c / &content;
                if flip {
                    *c = -&*c;
                }
            }
        }
        Ok(Recurrence {
            coeffs,
            verified_range: None,
        })
    }

    pub fn from_i64(coeffs: &[&[i64]]) -> Result<Self> {
        Self::new(
            coeffs
                .iter()
                .map(|p| p.iter().map(|&c| BigInt::from(c)).collect())
                .collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .map(|p| p.len().saturating_sub(1))
            .max()
            .unwrap_or(0)
    }

    pub fn coefficients(&self) -> &[Vec<BigInt>] {
        &self.coeffs
    }

    /// `sum_j q_j(n) a(n - j)`, or `None` if a needed term is missing.
    pub fn residual(&self, seq: &Sequence, n: i64) -> Option<BigInt> {
        let mut acc = BigInt::zero();
        for (j, q) in self.coeffs.iter().enumerate() {
            let a = seq.get(n - j as i64)?;
            if !q.is_empty() && !a.is_zero() {
                acc += eval(q, n) * a;
            }
        }
        Some(acc)
    }

    /// Human-readable form such as
    /// `(n+1)*a(n) - (2*n-1)*a(n-1) - 3*(n-2)*a(n-2) = 0`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (j, q) in self.coeffs.iter().enumerate() {
            if q.is_empty() {
                continue;
            }
            let negative = q.last().is_some_and(Signed::is_negative);
            let abs: Vec<BigInt> = q.iter().map(|c| if negative { -c } else { c.clone() }).collect();
            let content = abs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
            let prim: Vec<BigInt> = abs.iter().map(|c| c / &content).collect();
            let mut factors = Vec::new();
            if !content.is_one() {
                factors.push(content.to_string());
            }
            let terms = prim.iter().filter(|c| !c.is_zero()).count();
            let body = render_poly(&prim);
            if terms > 1 {
                factors.push(format!("({body})"));
            } else if body != "1" {
                factors.push(body);
            }
            factors.push(if j == 0 { "a(n)".to_string() } else { format!("a(n-{j})") });
            let term = factors.join("*");
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        out.push_str(" = 0");
        out
    }
}

impl fmt::Display for Recurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Polynomial in `n` by descending powers, e.g. `2*n^2-3*n+1`.
fn render_poly(p: &[BigInt]) -> String {
    let mut out = String::new();
    for (e, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let a = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push(if c.is_negative() { '-' } else { '+' });
        }
        let mono = match e {
            0 => String::new(),
            1 => "n".to_string(),
            _ => format!("n^{e}"),
        };
        match (a.is_one(), mono.is_empty()) {
            (_, true) => out.push_str(&a.to_string()),
            (true, false) => out.push_str(&mono),
            (false, false) => out.push_str(&format!("{a}*{mono}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Outcome of [`verify_recurrence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verification {
    pub holds: bool,
    pub first_failure: Option<i64>,
}

/// Exact check of the relation for every `n` in `from..=to`.
pub fn verify_recurrence(rec: &Recurrence, seq: &Sequence, from: i64, to: i64) -> Result<Verification> {
    for n in from..=to {
        let r = rec.residual(seq, n).ok_or_else(|| {
            Error::InvalidQuery(format!("n = {n} needs terms outside the sequence"))
        })?;
        if !r.is_zero() {
            return Ok(Verification {
                holds: false,
                first_failure: Some(n),
            });
        }
    }
    Ok(Verification {
        holds: true,
        first_failure: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GuessOptions {
    pub max_order: usize,
    pub max_degree: usize,
    /// Trailing equations kept out of the fit and used only for checking.
    pub margin: usize,
}

impl GuessOptions {
    pub fn new(max_order: usize, max_degree: usize) -> Self {
        GuessOptions {
            max_order,
            max_degree,
            margin: 8,
        }
    }

    pub fn required_terms(&self) -> usize {
        (self.max_order + 1) * (self.max_degree + 1) + self.max_order + self.margin
    }
}

pub fn guess_recurrence(seq: &Sequence, max_order: usize, max_degree: usize) -> Result<Option<Recurrence>> {
    guess_recurrence_with(seq, &GuessOptions::new(max_order, max_degree))
}

/// The recurrence of least order, then least degree, that fits every term.
/// `Ok(None)` when nothing within the bounds survives the held-out check.
pub fn guess_recurrence_with(seq: &Sequence, opts: &GuessOptions) -> Result<Option<Recurrence>> {
    let needed = opts.required_terms();
    if seq.len() < needed || opts.max_order == 0 {
        return Err(Error::InsufficientData {
            needed,
            got: seq.len(),
        });
    }
    for order in 1..=opts.max_order {
        for degree in 0..=opts.max_degree {
            if let Some(rec) = fit(seq, order, degree, opts.margin) {
                return Ok(Some(rec));
            }
        }
    }
    Ok(None)
}

fn fit(seq: &Sequence, order: usize, degree: usize, margin: usize) -> Option<Recurrence> {
    let first = seq.start + order as i64;
    let last = seq.end();
    let fit_last = last - margin as i64;
    let unknowns = (order + 1) * (degree + 1);
    if fit_last < first || ((fit_last - first + 1) as usize) < unknowns {
        return None;
    }
    let rows: Vec<Vec<BigInt>> = (first..=fit_last)
        .map(|n| {
            let mut row = Vec::with_capacity(unknowns);
            for j in 0..=order {
                let a = seq.get(n - j as i64).expect("index within sequence");
                let mut pw = a.clone();
                for _ in 0..=degree {
                    row.push(pw.clone());
                    pw *= n;
                }
            }
            row
        })
        .collect();
    for v in nullspace(rows, unknowns) {
        let coeffs: Vec<Vec<BigInt>> = v.chunks(degree + 1).map(|c| c.to_vec()).collect();
        let zero_ends = coeffs[0].iter().all(Zero::is_zero) || coeffs[order].iter().all(Zero::is_zero);
        if zero_ends {
            continue;
        }
        let Ok(mut rec) = Recurrence::new(coeffs) else { continue };
        let check = verify_recurrence(&rec, seq, first, last).ok()?;
        if check.holds {
            rec.verified_range = Some((first, last));
            return Some(rec);
        }
    }
    None
}

/// Integer basis of the right nullspace, by fraction-free elimination to
/// reduced echelon form.
fn nullspace(mut rows: Vec<Vec<BigInt>>, cols: usize) -> Vec<Vec<BigInt>> {
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot_row = rows[r].clone();
        let pv = pivot_row[c].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &*x * &pv - &factor * y;
            }
            primitive(row);
        }
        pivots.push((r, c));
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    (0..cols)
        .filter(|c| !pivot_cols.contains(c))
        .map(|free| {
            // x_free = L, x_pc = -L * row[free] / row[pc]
            let lcm = pivots
                .iter()
                .fold(BigInt::one(), |l, &(row, pc)| l.lcm(&rows[row][pc]));
            let mut v = vec![BigInt::zero(); cols];
            v[free] = lcm.clone();
            for &(row, pc) in &pivots {
                v[pc] = -(&lcm * &rows[row][free]) / &rows[row][pc];
            }
            primitive(&mut v);
            v
        })
        .collect()
}

fn primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Terms produced by [`extend_sequence`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub start: i64,
    pub terms: Vec<BigRational>,
    /// Indices where the recurrence produced a non-integer.
    pub non_integral: Vec<i64>,
}

impl Extension {
    /// All terms as integers, if none was flagged.
    pub fn integers(&self) -> Option<Vec<BigInt>> {
        self.non_integral
            .is_empty()
            .then(|| self.terms.iter().map(|t| t.to_integer()).collect())
    }

    pub fn get(&self, n: i64) -> Option<&BigRational> {
        usize::try_from(n - self.start).ok().and_then(|i| self.terms.get(i))
    }
}

/// Runs the recurrence forward from `initial` up to `a(n_target)` in exact
/// rational arithmetic.
pub fn extend_sequence(rec: &Recurrence, initial: &Sequence, n_target: i64) -> Result<Extension> {
    if initial.len() < rec.order() {
        return Err(Error::InsufficientData {
            needed: rec.order(),
            got: initial.len(),
        });
    }
    let mut terms: Vec<BigRational> = initial
        .terms
        .iter()
        .map(|t| BigRational::from_integer(t.clone()))
        .collect();
    let mut non_integral = Vec::new();
    for n in initial.end() + 1..=n_target {
        let lead = eval(&rec.coeffs[0], n);
        if lead.is_zero() {
            return Err(Error::LeadingCoefficientZero(n));
        }
        let idx = (n - initial.start) as usize;
        let mut rhs = BigRational::zero();
        for (j, q) in rec.coeffs.iter().enumerate().skip(1) {
            if q.is_empty() {
                continue;
            }
            rhs -= BigRational::from_integer(eval(q, n)) * &terms[idx - j];
        }
        let value = rhs / BigRational::from_integer(lead);
        if !value.is_integer() {
            non_integral.push(n);
        }
        terms.push(value);
    }
    Ok(Extension {
        start: initial.start,
        terms,
        non_integral,
    })
}
