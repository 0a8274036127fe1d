//! Dense univariate polynomials over the integers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Dense polynomial; index = degree. Trailing zeros are always trimmed, so
/// the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DensePolynomial {
    coeffs: Vec<BigInt>,
}

impl DensePolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        DensePolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        DensePolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        DensePolynomial {
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `z^j`; zero past the degree.
    pub fn coeff(&self, j: usize) -> BigInt {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn coeff_ref(&self, j: usize) -> Option<&BigInt> {
        self.coeffs.get(j)
    }

    pub fn truncate(&self, max_deg: usize) -> Self {
        Self::new(self.coeffs.iter().take(max_deg + 1).cloned().collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }
}

impl fmt::Display for DensePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*z")?,
                _ => write!(f, "{c}*z^{d}")?,
            }
        }
        Ok(())
    }
}

/// `a * b` with every term of degree above `max_deg` dropped.
pub fn poly_mul_trunc(a: &DensePolynomial, b: &DensePolynomial, max_deg: usize) -> DensePolynomial {
    if a.is_zero() || b.is_zero() {
        return DensePolynomial::zero();
    }
    let len = (a.coeffs.len() + b.coeffs.len() - 1).min(max_deg + 1);
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.coeffs.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    DensePolynomial::new(out)
}

/// How [`poly_pow_coeffs_with`] computes a truncated power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PowStrategy {
    /// First-order coefficient recurrence from `phi * (phi^m)' = m * phi' * phi^m`.
    #[default]
    Recurrence,
    /// Square-and-multiply with truncation after every product.
    BinaryExponentiation,
}

/// Coefficients `c_0..=c_max_deg` of `phi^m` using the default strategy.
pub fn poly_pow_coeffs(phi: &DensePolynomial, m: u64, max_deg: usize) -> Result<DensePolynomial> {
    poly_pow_coeffs_with(phi, m, max_deg, PowStrategy::default())
}

pub fn poly_pow_coeffs_with(
    phi: &DensePolynomial,
    m: u64,
    max_deg: usize,
    strategy: PowStrategy,
) -> Result<DensePolynomial> {
    match strategy {
        PowStrategy::Recurrence => pow_by_recurrence(phi, m, max_deg),
        PowStrategy::BinaryExponentiation => Ok(pow_binary(phi, m, max_deg)),
    }
}

fn pow_binary(phi: &DensePolynomial, mut m: u64, max_deg: usize) -> DensePolynomial {
    let mut acc = DensePolynomial::one();
    let mut base = phi.truncate(max_deg);
    while m > 0 {
        if m & 1 == 1 {
            acc = poly_mul_trunc(&acc, &base, max_deg);
        }
        m >>= 1;
        if m > 0 {
            base = poly_mul_trunc(&base, &base, max_deg);
        }
    }
    acc
}

// With a_i the coefficients of phi and a_0 = 1, comparing z^(j-1) on both
// sides gives  j c_j = sum_{i=1..min(j, deg)} a_i ((m+1) i - j) c_{j-i}.
fn pow_by_recurrence(phi: &DensePolynomial, m: u64, max_deg: usize) -> Result<DensePolynomial> {
    if !phi.coeff_ref(0).is_some_and(One::is_one) {
        return Err(Error::NonUnitConstantTerm);
    }
    let deg = phi.degree().unwrap_or(0);
    let top = (m as u128 * deg as u128).min(max_deg as u128) as usize;
    let support: Vec<(usize, &BigInt)> = phi
        .coeffs
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, a)| !a.is_zero())
        .collect();
    let m1 = BigInt::from(m) + 1;
    let mut c: Vec<BigInt> = Vec::with_capacity(top + 1);
    c.push(BigInt::one());
    for j in 1..=top {
        let mut acc = BigInt::zero();
        for &(i, a) in &support {
            if i > j {
                break;
            }
            let prev = &c[j - i];
            if prev.is_zero() {
                continue;
            }
            let w: BigInt = &m1 * i - j;
            if w.is_zero() {
                continue;
            }
            if a.is_one() {
                acc += w * prev;
            } else {
                acc += w * a * prev;
            }
        }
        let (q, r) = acc.div_rem(&BigInt::from(j));
        assert!(
            r.is_zero(),
            "power recurrence produced a non-integral coefficient at degree {j}"
        );
        c.push(q);
    }
    Ok(DensePolynomial::new(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> DensePolynomial {
        DensePolynomial::from_i64(c)
    }

    #[test]
    fn truncated_products() {
        assert_eq!(poly_mul_trunc(&p(&[1, 1]), &p(&[1, 1]), 2), p(&[1, 2, 1]));
        assert_eq!(poly_mul_trunc(&p(&[1, 1]), &p(&[1, 1]), 1), p(&[1, 2]));
        assert_eq!(
            poly_mul_trunc(&p(&[1, 1, 1]), &p(&[1, 1, 1]), 4),
            p(&[1, 2, 3, 2, 1])
        );
        assert_eq!(poly_mul_trunc(&p(&[1, 1]), &DensePolynomial::zero(), 3), DensePolynomial::zero());
    }

    #[test]
    fn small_powers() {
        let phi = p(&[1, 1, 1]);
        for strategy in [PowStrategy::Recurrence, PowStrategy::BinaryExponentiation] {
            assert_eq!(
                poly_pow_coeffs_with(&phi, 3, 6, strategy).unwrap(),
                p(&[1, 3, 6, 7, 6, 3, 1])
            );
            assert_eq!(poly_pow_coeffs_with(&phi, 0, 3, strategy).unwrap(), p(&[1]));
        }
    }

    #[test]
    fn thirty_vertex_coefficient() {
        let phi = p(&[1, 1, 1]);
        let c = poly_pow_coeffs(&phi, 30, 29).unwrap();
        assert_eq!(c.coeff(29), BigInt::from(30u64 * 593742784829));
        assert_eq!(c.degree(), Some(29));
    }

    #[test]
    fn non_unit_constant_term_is_rejected() {
        assert_eq!(
            poly_pow_coeffs(&p(&[2, 1]), 3, 3),
            Err(Error::NonUnitConstantTerm)
        );
        assert_eq!(
            poly_pow_coeffs_with(&p(&[2, 1]), 3, 3, PowStrategy::BinaryExponentiation).unwrap(),
            p(&[8, 12, 6, 1])
        );
    }

    #[test]
    fn recurrence_handles_general_coefficients() {
        // (1 - 2z + 3z^3)^4 against repeated multiplication
        let phi = p(&[1, -2, 0, 3]);
        let mut direct = DensePolynomial::one();
        for _ in 0..4 {
            direct = poly_mul_trunc(&direct, &phi, 100);
        }
        assert_eq!(poly_pow_coeffs(&phi, 4, 100).unwrap(), direct);
    }

    fn child_phi() -> impl Strategy<Value = DensePolynomial> {
        proptest::collection::btree_set(1usize..6, 0..4).prop_map(|s| {
            let mut c = vec![0i64; 7];
            c[0] = 1;
            for i in s {
                c[i] = 1;
            }
            p(&c)
        })
    }

    proptest! {
        #[test]
        fn strategies_agree(phi in child_phi(), m in 0u64..25, max_deg in 0usize..40) {
            let a = poly_pow_coeffs_with(&phi, m, max_deg, PowStrategy::Recurrence).unwrap();
            let b = poly_pow_coeffs_with(&phi, m, max_deg, PowStrategy::BinaryExponentiation).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn lagrange_integrality(phi in child_phi(), n in 1u64..60) {
            let c = poly_pow_coeffs(&phi, n, n as usize - 1).unwrap();
            prop_assert!((c.coeff(n as usize - 1) % BigInt::from(n)).is_zero());
        }
    }
}
