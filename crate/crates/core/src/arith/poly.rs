//! Dense integer polynomials, just enough to build cyclotomic polynomials.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::modular::divisors;
use crate::error::{invalid, Result};
use crate::scalar::{self, ExactInt};

/// Coefficients lowest degree first; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IntPolynomial<T> {
    coeffs: Vec<T>,
}

impl<T: ExactInt> IntPolynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    /// `x^n - 1`
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[0] = -T::one();
        coeffs[n] = T::one();
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let prod = scalar::mul(a, b)?;
                out[i + j] = scalar::add(&out[i + j], &prod)?;
            }
        }
        Ok(Self::new(out))
    }

    /// Quotient and remainder by a monic divisor.
    pub fn div_rem_monic(&self, divisor: &Self) -> Result<(Self, Self)> {
        let Some(d) = divisor.degree() else {
            return invalid("division by the zero polynomial");
        };
        if !divisor.leading().is_some_and(One::is_one) {
            return invalid("divisor must be monic");
        }
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); rem.len() - d];
        for k in (d..rem.len()).rev() {
            let c = rem[k].clone();
            if c.is_zero() {
                continue;
            }
            quot[k - d] = c.clone();
            for (i, b) in divisor.coeffs.iter().enumerate() {
                let prod = scalar::mul(&c, b)?;
                rem[k - d + i] = scalar::sub(&rem[k - d + i], &prod)?;
            }
        }
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Reduces in place modulo a monic polynomial, leaving at most `deg` coefficients.
    pub(crate) fn reduce_coeffs_monic(coeffs: &mut Vec<T>, modulus: &[i64]) -> Result<()> {
        let d = modulus.len() - 1;
        let modulus: Vec<T> = modulus.iter().map(|&c| T::from_small(c)).collect();
        for k in (d..coeffs.len()).rev() {
            let c = std::mem::replace(&mut coeffs[k], T::zero());
            if c.is_zero() {
                continue;
            }
            for (i, b) in modulus[..d].iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = scalar::mul(&c, b)?;
                coeffs[k - d + i] = scalar::sub(&coeffs[k - d + i], &prod)?;
            }
        }
        coeffs.truncate(d);
        coeffs.resize(d, T::zero());
        Ok(())
    }
}

/// The `n`-th cyclotomic polynomial, by exact division of `x^n - 1` by
/// `Phi_d` for each proper divisor `d` of `n`.
pub fn cyclotomic_polynomial<T: ExactInt>(n: u64) -> Result<IntPolynomial<T>> {
    if n == 0 {
        return invalid("cyclotomic index must be at least 1");
    }
    let mut known: BTreeMap<u64, IntPolynomial<T>> = BTreeMap::new();
    for d in divisors(n) {
        let mut poly = IntPolynomial::x_pow_minus_one(d as usize);
        for (_, phi) in known.range(..d).filter(|(&k, _)| d % k == 0) {
            let (q, r) = poly.div_rem_monic(phi)?;
            debug_assert!(r.is_zero());
            poly = q;
        }
        known.insert(d, poly);
    }
    Ok(known.remove(&n).expect("n divides itself"))
}
