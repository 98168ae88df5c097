//! Exact arithmetic in `Z[zeta_e]`.
//!
//! Elements are stored in the power basis `1, zeta, ..., zeta^(phi(e)-1)`,
//! reduced modulo the `e`-th cyclotomic polynomial, so equality and the zero
//! test are coefficient comparisons.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::arith::poly::{cyclotomic_polynomial, IntPolynomial};
use crate::error::{invalid, Error, Result};
use crate::scalar::{self, ExactInt};

/// Handle on `Z[zeta_e]`; clones share the reduction polynomial.
#[derive(Clone, Debug)]
pub struct CyclotomicRing {
    order: u64,
    modulus: Arc<[i64]>,
}

impl PartialEq for CyclotomicRing {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl Eq for CyclotomicRing {}

impl CyclotomicRing {
    pub fn new(order: u64) -> Result<Self> {
        if order == 0 {
            return invalid("root of unity order must be at least 1");
        }
        let phi = cyclotomic_polynomial::<i64>(order)?;
        Ok(CyclotomicRing {
            order,
            modulus: phi.coeffs().into(),
        })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// `phi(e)`, the rank of the ring over `Z`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn zero<T: ExactInt>(&self) -> CycInt<T> {
        CycInt {
            ring: self.clone(),
            coeffs: vec![T::zero(); self.degree()],
        }
    }

    pub fn from_int<T: ExactInt>(&self, n: T) -> CycInt<T> {
        let mut z = self.zero();
        z.coeffs[0] = n;
        z
    }

    /// `zeta_e^k` for any integer `k`.
    pub fn root<T: ExactInt>(&self, k: i64) -> Result<CycInt<T>> {
        let k = k.rem_euclid(self.order as i64) as usize;
        let mut counts = vec![T::zero(); k + 1];
        counts[k] = T::one();
        self.from_power_coeffs(counts)
    }

    /// `sum_k counts[k] * zeta^k`, for a coefficient vector of any length.
    pub fn from_power_coeffs<T: ExactInt>(&self, mut counts: Vec<T>) -> Result<CycInt<T>> {
        // fold exponents modulo e first; zeta^e = 1
        let e = self.order as usize;
        if counts.len() > e {
            for k in e..counts.len() {
                let c = std::mem::replace(&mut counts[k], T::zero());
                counts[k % e] = scalar::add(&counts[k % e], &c)?;
            }
            counts.truncate(e);
        }
        IntPolynomial::reduce_coeffs_monic(&mut counts, &self.modulus)?;
        Ok(CycInt {
            ring: self.clone(),
            coeffs: counts,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycInt<T> {
    ring: CyclotomicRing,
    coeffs: Vec<T>,
}

impl<T: ExactInt> CycInt<T> {
    pub fn ring(&self) -> &CyclotomicRing {
        &self.ring
    }

    pub fn order(&self) -> u64 {
        self.ring.order
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.ring.order != other.ring.order {
            return Err(Error::MixedOrders {
                left: self.ring.order,
                right: other.ring.order,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| scalar::add(a, b))
            .collect::<Result<_>>()?;
        Ok(CycInt {
            ring: self.ring.clone(),
            coeffs,
        })
    }

    pub fn neg(&self) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| scalar::sub(&T::zero(), a))
            .collect::<Result<_>>()?;
        Ok(CycInt {
            ring: self.ring.clone(),
            coeffs,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg()?)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let n = self.coeffs.len();
        let mut prod = vec![T::zero(); 2 * n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let t = scalar::mul(a, b)?;
                prod[i + j] = scalar::add(&prod[i + j], &t)?;
            }
        }
        IntPolynomial::reduce_coeffs_monic(&mut prod, &self.ring.modulus)?;
        Ok(CycInt {
            ring: self.ring.clone(),
            coeffs: prod,
        })
    }

    pub fn scale(&self, k: &T) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| scalar::mul(a, k))
            .collect::<Result<_>>()?;
        Ok(CycInt {
            ring: self.ring.clone(),
            coeffs,
        })
    }
}

impl<T: ExactInt> fmt::Display for CycInt<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                _ if a.is_one() => {}
                _ => write!(f, "{a}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "z{}", self.ring.order)?,
                _ => write!(f, "z{}^{i}", self.ring.order)?,
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `zeta_e^k` in a freshly built ring.
pub fn cyc_make<T: ExactInt>(e: u64, k: i64) -> Result<CycInt<T>> {
    CyclotomicRing::new(e)?.root(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn to_complex(z: &CycInt<i64>) -> Complex64 {
        let e = z.order() as f64;
        z.coeffs()
            .iter()
            .enumerate()
            .map(|(i, &c)| Complex64::from_polar(c as f64, std::f64::consts::TAU * i as f64 / e))
            .sum()
    }

    #[test]
    fn spec_examples() {
        assert_eq!(cyc_make::<i64>(4, 2).unwrap().coeffs(), &[-1, 0]);
        assert_eq!(cyc_make::<i64>(3, 2).unwrap().coeffs(), &[-1, -1]);
        let s = cyc_make::<i64>(6, 0)
            .unwrap()
            .add(&cyc_make(6, 3).unwrap())
            .unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn mixed_orders_rejected() {
        let a = cyc_make::<i64>(4, 1).unwrap();
        let b = cyc_make::<i64>(6, 1).unwrap();
        assert_eq!(a.add(&b), Err(Error::MixedOrders { left: 4, right: 6 }));
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn overflow_is_reported_not_wrapped() {
        let ring = CyclotomicRing::new(4).unwrap();
        let big = ring.from_int(i64::MAX);
        assert_eq!(big.add(&ring.from_int(1)), Err(Error::ArithmeticOverflow));
        let bigger = ring.from_int(BigInt::from(i64::MAX));
        assert!(bigger.add(&ring.from_int(BigInt::from(1))).is_ok());
    }

    #[test]
    fn exponent_periodicity() {
        for e in 1..=30u64 {
            let ring = CyclotomicRing::new(e).unwrap();
            for k in -70i64..70 {
                let a: CycInt<i64> = ring.root(k).unwrap();
                let b: CycInt<i64> = ring.root(k.rem_euclid(e as i64)).unwrap();
                assert_eq!(a, b, "e={e} k={k}");
            }
        }
    }

    #[test]
    fn geometric_sums_vanish() {
        for e in 1..=30u64 {
            let ring = CyclotomicRing::new(e).unwrap();
            for d in crate::arith::modular::divisors(e)
                .into_iter()
                .filter(|&d| d > 1)
            {
                // zeta^(e/d) is a primitive d-th root; summing its first d powers gives 0
                let step = (e / d) as i64;
                let mut acc = ring.zero::<i64>();
                for k in 0..d as i64 {
                    acc = acc.add(&ring.root(k * step).unwrap()).unwrap();
                }
                assert!(acc.is_zero(), "e={e} d={d}");
            }
        }
    }

    #[test]
    fn roots_multiply_by_adding_exponents() {
        let ring = CyclotomicRing::new(18).unwrap();
        for a in 0..18 {
            for b in 0..18 {
                let lhs = ring
                    .root::<i64>(a)
                    .unwrap()
                    .mul(&ring.root(b).unwrap())
                    .unwrap();
                assert_eq!(lhs, ring.root(a + b).unwrap());
            }
        }
    }

    #[test]
    fn display() {
        let ring = CyclotomicRing::new(6).unwrap();
        let z = ring
            .from_power_coeffs::<i64>(vec![2, 1, 2, 1, 2, 1])
            .unwrap();
        assert_eq!(z.to_string(), "0");
        let w: CycInt<i64> = ring.from_power_coeffs(vec![1, -3]).unwrap();
        assert_eq!(w.to_string(), "1 - 3*z6");
    }

    proptest! {
        #[test]
        fn zero_test_agrees_with_floating_point(e in 1u64..=30, raw in prop::collection::vec(-100i64..=100, 30)) {
            let ring = CyclotomicRing::new(e).unwrap();
            let coeffs = raw[..ring.degree()].to_vec();
            let z: CycInt<i64> = ring.from_power_coeffs(coeffs).unwrap();
            prop_assert_eq!(z.is_zero(), to_complex(&z).norm() < 1e-6);
            // a vanishing combination written in the unreduced basis
            let geometric: CycInt<i64> = ring.from_power_coeffs(vec![raw[0]; e as usize]).unwrap();
            prop_assert_eq!(geometric.is_zero(), e > 1 || raw[0] == 0);
            prop_assert!(to_complex(&geometric).norm() < 1e-6 || !geometric.is_zero());
        }

        #[test]
        fn ring_axioms(e in 1u64..=24, a in prop::collection::vec(-50i64..=50, 24),
                       b in prop::collection::vec(-50i64..=50, 24),
                       c in prop::collection::vec(-50i64..=50, 24)) {
            let ring = CyclotomicRing::new(e).unwrap();
            let a: CycInt<i64> = ring.from_power_coeffs(a).unwrap();
            let b: CycInt<i64> = ring.from_power_coeffs(b).unwrap();
            let c: CycInt<i64> = ring.from_power_coeffs(c).unwrap();
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(
                a.mul(&b).unwrap().mul(&c).unwrap(),
                a.mul(&b.mul(&c).unwrap()).unwrap()
            );
            prop_assert!(a.sub(&a).unwrap().is_zero());
            let z = to_complex(&a.mul(&b).unwrap()) - to_complex(&a) * to_complex(&b);
            prop_assert!(z.norm() < 1e-6);
        }
    }
}
