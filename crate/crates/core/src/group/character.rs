use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use super::FinAbGroup;
use crate::arith::CycInt;
use crate::error::{Error, Result};
use crate::scalar::ExactInt;

/// A homomorphism `G -> mu_e`, `e` the exponent of `G`.
///
/// Stored by its values on the generators `g_i` of `(Z/mZ)^x`:
/// `chi(g_i) = zeta_e^exponents[i]`. Characters of a quotient are exactly
/// the characters of the base group that are trivial on the kernel.
#[derive(Clone)]
pub struct Character {
    group: Arc<FinAbGroup>,
    exponents: Vec<u64>,
}

impl PartialEq for Character {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.exponents == other.exponents
    }
}

impl Eq for Character {}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Character")
            .field("modulus", &self.group.modulus())
            .field("value_order", &self.value_order())
            .field("exponents", &self.exponents)
            .finish()
    }
}

impl Character {
    pub fn group(&self) -> &Arc<FinAbGroup> {
        &self.group
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// The `e` with values in `mu_e`.
    pub fn value_order(&self) -> u64 {
        self.group.exponent()
    }

    /// `k` with `chi(g) = zeta_e^k`.
    pub fn exponent_at(&self, g: u64) -> Result<u64> {
        let e = self.value_order();
        let logs = self.group.base().exponents(g)?;
        Ok(logs
            .iter()
            .zip(&self.exponents)
            .fold(0u64, |acc, (&l, &a)| {
                ((acc as u128 + l as u128 * a as u128) % e as u128) as u64
            }))
    }

    pub fn evaluate<T: ExactInt>(&self, g: u64) -> Result<CycInt<T>> {
        let k = self.exponent_at(g)?;
        self.group.value_ring().root(k as i64)
    }

    /// Order of the character in the dual group.
    pub fn order(&self) -> u64 {
        let e = self.value_order();
        e / self.exponents.iter().fold(e, |acc, &a| acc.gcd(&a))
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&a| a == 0)
    }

    pub fn is_odd(&self) -> bool {
        let e = self.value_order();
        self.exponent_at(self.group.conj())
            .expect("conjugation is a unit")
            * 2
            == e
    }

    /// The complex conjugate character.
    pub fn conjugate(&self) -> Character {
        let e = self.value_order();
        Character {
            group: self.group.clone(),
            exponents: self.exponents.iter().map(|&a| (e - a) % e).collect(),
        }
    }

    pub fn product(&self, other: &Character) -> Result<Character> {
        if self.group != other.group {
            return Err(Error::InvalidInput(
                "characters belong to different groups".into(),
            ));
        }
        let e = self.value_order();
        Ok(Character {
            group: self.group.clone(),
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(&a, &b)| (a + b) % e)
                .collect(),
        })
    }
}

/// All `|G|` characters, in lexicographic order of their exponent vectors.
pub fn enumerate_characters(group: &Arc<FinAbGroup>) -> Vec<Character> {
    let e = group.exponent();
    let orders = group.base().orders();
    // chi(g_i)^{n_i} = 1 forces exponents[i] to be a multiple of e / gcd(e, n_i)
    let steps: Vec<u64> = orders.iter().map(|&n| e / e.gcd(&n)).collect();
    let counts: Vec<u64> = orders.iter().map(|&n| e.gcd(&n)).collect();
    let kernel_logs: Vec<Vec<u64>> = group
        .kernel()
        .iter()
        .map(|&h| {
            group
                .base()
                .exponents(h)
                .expect("kernel elements are units")
        })
        .collect();

    let mut out = Vec::with_capacity(group.order());
    let mut digits = vec![0u64; orders.len()];
    loop {
        let exponents: Vec<u64> = digits.iter().zip(&steps).map(|(&d, &s)| d * s).collect();
        let trivial_on_kernel = kernel_logs.iter().all(|logs| {
            logs.iter()
                .zip(&exponents)
                .fold(0u128, |acc, (&l, &a)| acc + l as u128 * a as u128)
                % e as u128
                == 0
        });
        if trivial_on_kernel {
            out.push(Character {
                group: group.clone(),
                exponents,
            });
        }
        // last coordinate fastest gives lexicographic order
        let mut i = digits.len();
        loop {
            if i == 0 {
                debug_assert_eq!(out.len(), group.order());
                return out;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < counts[i] {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Characters with `chi(iota) = -1`.
pub fn odd_characters(group: &Arc<FinAbGroup>) -> Vec<Character> {
    enumerate_characters(group)
        .into_iter()
        .filter(Character::is_odd)
        .collect()
}

/// Characters trivial on every element of `set` (hence on the subgroup it generates).
pub fn characters_trivial_on(group: &Arc<FinAbGroup>, set: &[u64]) -> Result<Vec<Character>> {
    let set: Vec<u64> = set
        .iter()
        .map(|&s| group.canonical(s))
        .collect::<Result<_>>()?;
    Ok(enumerate_characters(group)
        .into_iter()
        .filter(|chi| set.iter().all(|&s| chi.exponent_at(s) == Ok(0)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic_subgroup, make_group};
    use proptest::prelude::*;

    #[test]
    fn counts() {
        for (m, n, odd) in [(27, 18, 9), (4, 2, 1), (8, 4, 2)] {
            let g = make_group(m, &[1]).unwrap();
            assert_eq!(enumerate_characters(&g).len(), n);
            assert_eq!(odd_characters(&g).len(), odd);
        }
    }

    #[test]
    fn odd_character_mod_4_sends_3_to_minus_one() {
        let g = make_group(4, &[1]).unwrap();
        let odd = odd_characters(&g);
        let v: CycInt<i64> = odd[0].evaluate(3).unwrap();
        assert_eq!(v.coeffs(), &[-1]);
    }

    #[test]
    fn odd_characters_mod_8_brute_force() {
        // characters of C2 x C2 on generators (7, 5): signs (s7, s5); odd means chi(7) = -1
        let g = make_group(8, &[1]).unwrap();
        assert_eq!(g.base().generators(), &[7, 5]);
        let odd: Vec<Vec<u64>> = odd_characters(&g)
            .iter()
            .map(|c| c.exponents().to_vec())
            .collect();
        assert_eq!(odd, vec![vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn trivial_on_subgroups() {
        let g = make_group(27, &[1]).unwrap();
        assert_eq!(characters_trivial_on(&g, &[1]).unwrap().len(), 18);
        assert_eq!(characters_trivial_on(&g, g.elements()).unwrap().len(), 1);
        let sub = cyclic_subgroup(&g, 4).unwrap();
        let chars = characters_trivial_on(&g, &sub).unwrap();
        assert_eq!(chars.len(), 2);
        assert!(chars[0].is_trivial());
        let quad: CycInt<i64> = chars[1].evaluate(2).unwrap();
        assert_eq!(quad, g.value_ring().from_int(-1));
        assert!(characters_trivial_on(&g, &[3]).is_err());
    }

    #[test]
    fn evaluation_examples() {
        let g = make_group(27, &[1]).unwrap();
        let chars = enumerate_characters(&g);
        let trivial = &chars[0];
        assert!(trivial.is_trivial());
        for &x in g.elements() {
            assert_eq!(
                trivial.evaluate::<i64>(x).unwrap(),
                g.value_ring().from_int(1)
            );
        }
        for chi in odd_characters(&g) {
            assert_eq!(
                chi.evaluate::<i64>(26).unwrap(),
                g.value_ring().from_int(-1)
            );
        }
        let chi = chars.iter().find(|c| c.exponents() == [1]).unwrap();
        assert_eq!(
            chi.evaluate::<i64>(2).unwrap(),
            g.value_ring().root(1).unwrap()
        );
        assert_eq!(
            chi.evaluate::<i64>(4).unwrap(),
            g.value_ring().root(2).unwrap()
        );
        assert_eq!(chi.order(), 18);
    }

    #[test]
    fn quotient_characters_lift_trivially_on_kernel() {
        let g = make_group(13, &[1, 3, 9]).unwrap();
        assert_eq!(g.order(), 4);
        let chars = enumerate_characters(&g);
        assert_eq!(chars.len(), 4);
        for chi in &chars {
            for &h in g.kernel() {
                assert_eq!(chi.exponent_at(h).unwrap(), 0);
            }
        }
        assert_eq!(odd_characters(&g).len(), 2);
    }

    fn valid_group() -> impl Strategy<Value = (u64, u64)> {
        // (m, a) where <a> avoids -1, giving a nontrivial kernel
        (3u64..120, 1u64..120).prop_filter_map("kernel must avoid -1", |(m, a)| {
            let full = make_group(m, &[1]).ok()?;
            let a = full.canonical(a % m).ok()?;
            let h = cyclic_subgroup(&full, a).ok()?;
            make_group(m, &h).ok().map(|_| (m, a))
        })
    }

    proptest! {
        #[test]
        fn orthogonality_and_homomorphism((m, a) in valid_group()) {
            let full = make_group(m, &[1]).unwrap();
            let h = cyclic_subgroup(&full, a).unwrap();
            let g = make_group(m, &h).unwrap();
            let chars = enumerate_characters(&g);
            prop_assert_eq!(chars.len(), g.order());
            prop_assert_eq!(odd_characters(&g).len() * 2, g.order());
            let ring = g.value_ring();
            for chi in &chars {
                let mut sum = ring.zero::<i64>();
                for &x in g.elements() {
                    sum = sum.add(&chi.evaluate(x).unwrap()).unwrap();
                }
                let expected = if chi.is_trivial() { g.order() as i64 } else { 0 };
                prop_assert_eq!(sum, ring.from_int(expected));
                for &x in g.elements().iter().take(6) {
                    for &y in g.elements().iter().take(6) {
                        let lhs: CycInt<i64> = chi.evaluate(g.mul(x, y)).unwrap();
                        let rhs = chi.evaluate::<i64>(x).unwrap().mul(&chi.evaluate(y).unwrap()).unwrap();
                        prop_assert_eq!(lhs, rhs);
                    }
                }
            }
            // distinct characters have distinct value tables
            let mut tables: Vec<Vec<u64>> = chars.iter()
                .map(|c| g.elements().iter().map(|&x| c.exponent_at(x).unwrap()).collect())
                .collect();
            tables.sort();
            tables.dedup();
            prop_assert_eq!(tables.len(), g.order());
        }

        #[test]
        fn trivial_on_forms_a_subgroup((m, a) in valid_group(), b in 1u64..200) {
            let g = make_group(m, &[1]).unwrap();
            let _ = a;
            let s = g.elements()[(b as usize) % g.order()];
            let sub = cyclic_subgroup(&g, s).unwrap();
            let chars = characters_trivial_on(&g, &[s]).unwrap();
            prop_assert_eq!(chars.len() * sub.len(), g.order());
            for x in &chars {
                prop_assert!(chars.contains(&x.conjugate()));
                for y in &chars {
                    prop_assert!(chars.contains(&x.product(y).unwrap()));
                }
            }
        }
    }

    #[test]
    fn odd_counts_up_to_200() {
        for m in 3..=200u64 {
            let g = make_group(m, &[1]).unwrap();
            assert_eq!(odd_characters(&g).len() * 2, g.order(), "m={m}");
        }
    }
}
