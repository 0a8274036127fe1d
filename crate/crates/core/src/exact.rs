//! Exact integer and rational helpers shared by every other module.
//!
//! Integers are [`num_bigint::BigInt`] and rationals are
//! [`num_rational::BigRational`]; the latter keeps itself in lowest terms
//! with a positive denominator after every operation. This module adds the
//! combinatorial numbers the engine needs, decimal rendering with a digit
//! guarantee, and [`Surd`], the closed form `q * sqrt(r)` in which every
//! scaled moment lives.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type ExactInt = BigInt;
pub type ExactRat = BigRational;

/// Stirling number of the second kind `S(p, k)`.
pub fn stirling2(p: u32, k: u32) -> BigInt {
    if k > p {
        return BigInt::zero();
    }
    stirling2_row(p).swap_remove(k as usize)
}

/// Row `[S(p, 0), ..., S(p, p)]` of the Stirling triangle.
pub fn stirling2_row(p: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for i in 1..=p as usize {
        let mut next = vec![BigInt::zero(); i + 1];
        for k in 1..=i {
            let mut v = BigInt::from(k) * row.get(k).cloned().unwrap_or_default();
            v += &row[k - 1];
            next[k] = v;
        }
        row = next;
    }
    row
}

/// `n (n-1) ... (n-k+1)`; the empty product is 1.
pub fn falling_factorial(n: &BigInt, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    let mut factor = n.clone();
    for _ in 0..k {
        if factor.is_zero() {
            return BigInt::zero();
        }
        acc *= &factor;
        factor -= 1;
    }
    acc
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn pow10(digits: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), digits as usize)
}

/// Exact integer square root test.
pub fn perfect_sqrt(x: &BigInt) -> Option<BigInt> {
    if x.is_negative() {
        return None;
    }
    let r = x.sqrt();
    (&r * &r == *x).then_some(r)
}

/// `sqrt(square) * 10^digits` rounded to the nearest integer, ties to even.
///
/// The rounding decision is exact: with `q = floor(sqrt(square) * 10^d)` the
/// value is rounded up iff `4 * square * 10^(2d) > (2q + 1)^2`.
pub fn round_sqrt_scaled(square: &BigRational, digits: u32) -> BigInt {
    assert!(!square.is_negative(), "square root of a negative rational");
    let scale = pow10(2 * digits);
    let scaled = square * BigRational::from_integer(scale);
    let q = scaled.floor().to_integer().sqrt();
    let twice = BigInt::from(2) * &q + 1;
    let lhs = scaled * BigRational::from_integer(BigInt::from(4));
    let rhs = BigRational::from_integer(&twice * &twice);
    match lhs.cmp(&rhs) {
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Equal if q.is_even() => q,
        std::cmp::Ordering::Equal => q + 1,
    }
}

/// Formats `value / 10^digits` with exactly `digits` fractional digits.
fn format_fixed(negative: bool, value: &BigInt, digits: u32) -> String {
    let s = value.to_string();
    let body = if digits == 0 {
        s
    } else {
        let d = digits as usize;
        let padded = if s.len() <= d {
            format!("{}{}", "0".repeat(d + 1 - s.len()), s)
        } else {
            s
        };
        let (int_part, frac_part) = padded.split_at(padded.len() - d);
        format!("{int_part}.{frac_part}")
    };
    if negative && !value.is_zero() {
        format!("-{body}")
    } else {
        body
    }
}

/// Decimal rendering of an exact rational, round-half-even at `digits`
/// fractional digits.
pub fn render_rational(x: &BigRational, digits: u32) -> String {
    let scaled = x.abs() * BigRational::from_integer(pow10(digits));
    let floor = scaled.floor();
    let frac = &scaled - &floor;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut q = floor.to_integer();
    if frac > half || (frac == half && q.is_odd()) {
        q += 1;
    }
    format_fixed(x.is_negative(), &q, digits)
}

/// Exact fraction string `p/q`, or `p` for integers.
pub fn fraction_string(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// A real number of the form `coeff * sqrt(radicand)`.
///
/// The radicand is kept as a positive integer and is `1` exactly when the
/// value is rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surd {
    coeff: BigRational,
    radicand: BigInt,
}

impl Surd {
    pub fn from_rational(q: BigRational) -> Self {
        Surd {
            coeff: q,
            radicand: BigInt::one(),
        }
    }

    /// `coeff * sqrt(radicand)` for a nonnegative rational radicand.
    pub fn new(coeff: BigRational, radicand: &BigRational) -> Self {
        assert!(!radicand.is_negative(), "negative radicand");
        if radicand.is_zero() || coeff.is_zero() {
            return Surd::from_rational(BigRational::zero());
        }
        // sqrt(a/b) = sqrt(a b) / b
        let den = radicand.denom().clone();
        let mut coeff = coeff / BigRational::from_integer(den.clone());
        let mut rad = radicand.numer() * den;
        if let Some(root) = perfect_sqrt(&rad) {
            coeff *= BigRational::from_integer(root);
            rad = BigInt::one();
        }
        Surd {
            coeff,
            radicand: rad,
        }
    }

    /// `sign * sqrt(square)`; a nonpositive sign with `square = 0` is zero.
    pub fn signed_sqrt(negative: bool, square: &BigRational) -> Self {
        let c = if negative {
            -BigRational::one()
        } else {
            BigRational::one()
        };
        Surd::new(c, square)
    }

    pub fn zero() -> Self {
        Surd::from_rational(BigRational::zero())
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn radicand(&self) -> &BigInt {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.coeff.is_negative()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.radicand.is_one().then_some(&self.coeff)
    }

    /// The exact square of the value.
    pub fn square(&self) -> BigRational {
        &self.coeff * &self.coeff * BigRational::from_integer(self.radicand.clone())
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        if factor.is_zero() {
            return Surd::zero();
        }
        Surd {
            coeff: &self.coeff * factor,
            radicand: self.radicand.clone(),
        }
    }

    pub fn mul(&self, other: &Surd) -> Self {
        let rad = BigRational::from_integer(&self.radicand * &other.radicand);
        Surd::new(&self.coeff * &other.coeff, &rad)
    }

    /// Sum, when both operands live in the same quadratic extension.
    pub fn checked_add(&self, other: &Surd) -> Option<Self> {
        if other.is_zero() {
            return Some(self.clone());
        }
        if self.is_zero() {
            return Some(other.clone());
        }
        if self.radicand == other.radicand {
            let coeff = &self.coeff + &other.coeff;
            return Some(if coeff.is_zero() {
                Surd::zero()
            } else {
                Surd {
                    coeff,
                    radicand: self.radicand.clone(),
                }
            });
        }
        // r1 / r2 = s^2 lets the first term be rewritten over sqrt(r2).
        let ratio = BigRational::new(self.radicand.clone(), other.radicand.clone());
        let s_num = perfect_sqrt(ratio.numer())?;
        let s_den = perfect_sqrt(ratio.denom())?;
        let coeff = &self.coeff * BigRational::new(s_num, s_den) + &other.coeff;
        Some(Surd::new(
            coeff,
            &BigRational::from_integer(other.radicand.clone()),
        ))
    }

    pub fn checked_sub(&self, other: &Surd) -> Option<Self> {
        self.checked_add(&other.scale(&-BigRational::one()))
    }

    /// Decimal rendering with `digits` correct fractional digits
    /// (round-half-even on the exact value).
    pub fn render(&self, digits: u32) -> String {
        if let Some(q) = self.as_rational() {
            return render_rational(q, digits);
        }
        let v = round_sqrt_scaled(&self.square(), digits);
        format_fixed(self.is_negative(), &v, digits)
    }

    pub fn to_f64(&self) -> f64 {
        let c = self.coeff.to_f64().unwrap_or(f64::NAN);
        let r = self.radicand.to_f64().unwrap_or(f64::INFINITY);
        if r.is_finite() && c.is_finite() {
            c * r.sqrt()
        } else {
            self.render(17).parse().unwrap_or(f64::NAN)
        }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand.is_one() {
            write!(f, "{}", fraction_string(&self.coeff))
        } else {
            write!(f, "{}*sqrt({})", fraction_string(&self.coeff), self.radicand)
        }
    }
}

/// Sign of a big integer as -1, 0 or 1.
pub fn sign_of(x: &BigInt) -> i32 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
