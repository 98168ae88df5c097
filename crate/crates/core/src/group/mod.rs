//! Finite abelian Galois groups `G = (Z/mZ)^x / H` and their characters.
//!
//! `G` is the Galois group of the fixed field of `H` inside `Q(zeta_m)`.
//! Elements are named by the smallest residue in their coset.

mod character;

pub use character::{characters_trivial_on, enumerate_characters, odd_characters, Character};

use std::sync::Arc;

use num_integer::Integer;

use crate::arith::modular::{mul_mod, unit_group_structure, UnitGroupPresentation};
use crate::arith::CyclotomicRing;
use crate::error::{invalid, Error, Result};

#[derive(Debug)]
pub struct FinAbGroup {
    base: UnitGroupPresentation,
    kernel: Vec<u64>,
    elements: Vec<u64>,
    // residue -> position of its coset in `elements`, u32::MAX for non-units
    coset: Vec<u32>,
    conj: u64,
    exponent: u64,
    values: CyclotomicRing,
}

impl PartialEq for FinAbGroup {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.modulus() == other.modulus() && self.kernel == other.kernel)
    }
}

impl Eq for FinAbGroup {}

/// `G = (Z/mZ)^x / H`. `H` must be a subgroup not containing `-1`.
pub fn make_group(m: u64, kernel: &[u64]) -> Result<Arc<FinAbGroup>> {
    FinAbGroup::new(m, kernel).map(Arc::new)
}

impl FinAbGroup {
    pub fn new(m: u64, kernel: &[u64]) -> Result<Self> {
        let base = unit_group_structure(m)?;
        let mut h: Vec<u64> = kernel.iter().map(|&a| a % m).collect();
        h.sort_unstable();
        h.dedup();
        if h.is_empty() {
            h.push(1);
        }
        if let Some(&bad) = h.iter().find(|&&a| !base.is_unit(a)) {
            return invalid(format!("kernel element {bad} is not a unit modulo {m}"));
        }
        if h.binary_search(&1).is_err() {
            return invalid("kernel must contain 1");
        }
        for &a in &h {
            for &b in &h {
                if h.binary_search(&mul_mod(a, b, m)).is_err() {
                    return invalid(format!(
                        "kernel is not closed under multiplication: {a}*{b} mod {m}"
                    ));
                }
            }
        }
        if h.binary_search(&(m - 1)).is_ok() {
            return Err(Error::InvalidCmField { modulus: m });
        }

        let mut coset = vec![u32::MAX; m as usize];
        let mut elements = Vec::new();
        for a in base.units() {
            if coset[a as usize] != u32::MAX {
                continue;
            }
            let idx = elements.len() as u32;
            elements.push(a);
            for &x in &h {
                coset[mul_mod(a, x, m) as usize] = idx;
            }
        }

        let mut group = FinAbGroup {
            base,
            kernel: h,
            elements,
            coset,
            conj: 0,
            exponent: 1,
            values: CyclotomicRing::new(1)?,
        };
        group.conj = group.canonical(m - 1)?;
        group.exponent = group
            .elements
            .iter()
            .map(|&a| group.element_order(a).expect("elements are units"))
            .fold(1, |acc, n| acc.lcm(&n));
        group.values = CyclotomicRing::new(group.exponent)?;
        Ok(group)
    }

    pub fn modulus(&self) -> u64 {
        self.base.modulus()
    }

    pub fn base(&self) -> &UnitGroupPresentation {
        &self.base
    }

    /// The subgroup `H`, sorted.
    pub fn kernel(&self) -> &[u64] {
        &self.kernel
    }

    /// Canonical coset representatives, ascending.
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> u64 {
        1
    }

    /// Complex conjugation, the class of `-1`.
    pub fn conj(&self) -> u64 {
        self.conj
    }

    /// Least common multiple of element orders; characters take values in `mu_exponent`.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn value_ring(&self) -> &CyclotomicRing {
        &self.values
    }

    /// Maps any unit residue to the representative of its class.
    pub fn canonical(&self, a: u64) -> Result<u64> {
        self.index_of(a).map(|i| self.elements[i])
    }

    /// Position of the class of `a` in [`elements`](Self::elements).
    pub fn index_of(&self, a: u64) -> Result<usize> {
        match self.coset[(a % self.modulus()) as usize] {
            u32::MAX => invalid(format!("{a} is not a unit modulo {}", self.modulus())),
            i => Ok(i as usize),
        }
    }

    /// True if `a` is one of the canonical representatives.
    pub fn contains(&self, a: u64) -> bool {
        self.elements.binary_search(&a).is_ok()
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let m = self.modulus();
        self.elements[self.coset[mul_mod(a % m, b % m, m) as usize] as usize]
    }

    pub fn inv(&self, a: u64) -> u64 {
        let m = self.modulus();
        let inv = crate::arith::modular::mod_inverse(a % m, m).expect("group elements are units");
        self.elements[self.coset[inv as usize] as usize]
    }

    pub fn pow(&self, a: u64, k: u64) -> u64 {
        let m = self.modulus();
        let r = crate::arith::modular::pow_mod(a, k, m);
        self.elements[self.coset[r as usize] as usize]
    }

    /// Order of the class of `a` in `G`.
    pub fn element_order(&self, a: u64) -> Result<u64> {
        let start = self.canonical(a)?;
        let mut x = start;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, start);
            k += 1;
        }
        Ok(k)
    }

    /// `gS` for a set of elements.
    pub fn translate(&self, g: u64, set: &[u64]) -> Vec<u64> {
        let mut out: Vec<u64> = set.iter().map(|&s| self.mul(g, s)).collect();
        out.sort_unstable();
        out
    }

    /// Preimage of a subset of `G` in `(Z/mZ)^x`, sorted.
    pub fn preimage(&self, set: &[u64]) -> Result<Vec<u64>> {
        let mut out = Vec::with_capacity(set.len() * self.kernel.len());
        for &s in set {
            let s = self.canonical(s)?;
            out.extend(self.kernel.iter().map(|&h| mul_mod(s, h, self.modulus())));
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Subgroup generated by a set of elements, sorted.
    pub fn subgroup_generated(&self, gens: &[u64]) -> Result<Vec<u64>> {
        let mut members = vec![1u64];
        let mut seen = vec![false; self.order()];
        seen[self.index_of(1)?] = true;
        let gens: Vec<u64> = gens
            .iter()
            .map(|&g| self.canonical(g))
            .collect::<Result<_>>()?;
        let mut frontier = 0;
        while frontier < members.len() {
            let x = members[frontier];
            frontier += 1;
            for &g in &gens {
                let y = self.mul(x, g);
                let i = self.index_of(y)?;
                if !seen[i] {
                    seen[i] = true;
                    members.push(y);
                }
            }
        }
        members.sort_unstable();
        Ok(members)
    }
}

/// `<a>` as a sorted set of representatives.
pub fn cyclic_subgroup(group: &FinAbGroup, a: u64) -> Result<Vec<u64>> {
    let a = group.canonical(a)?;
    let mut out = vec![1];
    let mut x = a;
    while x != 1 {
        out.push(x);
        x = group.mul(x, a);
    }
    out.sort_unstable();
    Ok(out)
}

pub fn is_subgroup(group: &FinAbGroup, set: &[u64]) -> bool {
    set.contains(&1)
        && set.iter().all(|&a| {
            set.iter()
                .all(|&b| set.binary_search(&group.mul(a, b)).is_ok())
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_group_mod_27() {
        let g = make_group(27, &[1]).unwrap();
        assert_eq!(g.order(), 18);
        assert_eq!(g.conj(), 26);
        assert_eq!(g.exponent(), 18);
        assert_eq!(g.element_order(2).unwrap(), 18);
    }

    #[test]
    fn full_group_mod_4() {
        let g = make_group(4, &[1]).unwrap();
        assert_eq!(g.elements(), &[1, 3]);
        assert_eq!(g.conj(), 3);
    }

    #[test]
    fn kernel_containing_minus_one_is_not_cm() {
        assert_eq!(
            make_group(27, &[1, 26]).unwrap_err(),
            Error::InvalidCmField { modulus: 27 }
        );
    }

    #[test]
    fn kernel_must_be_subgroup() {
        assert!(matches!(
            make_group(27, &[1, 2]),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            make_group(27, &[1, 3]),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            make_group(27, &[4, 7]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn quotient_by_order_three_subgroup() {
        // H = {1,2,4} cuts out Q(sqrt(-7))
        let g = make_group(7, &[1, 2, 4]).unwrap();
        assert_eq!(g.elements(), &[1, 3]);
        assert_eq!(g.conj(), 3);
        assert_eq!(g.canonical(6).unwrap(), 3);
        assert_eq!(g.canonical(4).unwrap(), 1);
        assert_eq!(g.exponent(), 2);
        assert_eq!(g.preimage(&[3]).unwrap(), vec![3, 5, 6]);
    }

    #[test]
    fn cyclic_subgroups() {
        let g = make_group(27, &[1]).unwrap();
        assert_eq!(
            cyclic_subgroup(&g, 4).unwrap(),
            vec![1, 4, 7, 10, 13, 16, 19, 22, 25]
        );
        assert_eq!(cyclic_subgroup(&g, 1).unwrap(), vec![1]);
        assert!(cyclic_subgroup(&g, 3).is_err());
        let g4 = make_group(4, &[1]).unwrap();
        assert_eq!(cyclic_subgroup(&g4, 3).unwrap(), vec![1, 3]);
    }

    #[test]
    fn coset_count_and_involution() {
        for m in 3..=120u64 {
            let g = make_group(m, &[1]).unwrap();
            assert_eq!(g.mul(g.conj(), g.conj()), 1);
            for &a in g.elements() {
                assert_eq!(g.mul(a, g.inv(a)), 1);
                assert_eq!(
                    cyclic_subgroup(&g, a).unwrap().len() as u64,
                    g.element_order(a).unwrap()
                );
            }
        }
        // every subgroup of (Z/21)^x generated by one element and avoiding -1
        let full = make_group(21, &[1]).unwrap();
        for &a in full.elements() {
            let h = cyclic_subgroup(&full, a).unwrap();
            assert!(is_subgroup(&full, &h));
            match make_group(21, &h) {
                Ok(q) => assert_eq!(q.order() * h.len(), 12),
                Err(e) => assert_eq!(e, Error::InvalidCmField { modulus: 21 }),
            }
        }
    }

    #[test]
    fn generated_subgroup() {
        let g = make_group(8, &[1]).unwrap();
        assert_eq!(g.subgroup_generated(&[3, 5]).unwrap(), vec![1, 3, 5, 7]);
        assert_eq!(g.subgroup_generated(&[]).unwrap(), vec![1]);
    }
}
