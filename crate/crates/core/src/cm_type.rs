//! CM-types: half-systems of embeddings, one from each pair `{g, iota g}`.

use std::sync::Arc;

use num_integer::Integer;

use crate::error::{invalid, Error, Result};
use crate::group::{make_group, FinAbGroup};

#[derive(Clone, Debug)]
pub struct CmType {
    group: Arc<FinAbGroup>,
    phi: Vec<u64>,
    // characteristic function, indexed like `group.elements()`
    indicator: Vec<bool>,
}

impl PartialEq for CmType {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.phi == other.phi
    }
}

impl Eq for CmType {}

impl CmType {
    pub fn group(&self) -> &Arc<FinAbGroup> {
        &self.group
    }

    /// The elements of `Phi`, ascending.
    pub fn phi(&self) -> &[u64] {
        &self.phi
    }

    /// Characteristic function of `Phi`; `g` may be any unit residue.
    pub fn indicator(&self, g: u64) -> bool {
        let i = self.group.index_of(g).expect("indicator of a non-unit");
        self.indicator[i]
    }

    pub fn contains(&self, g: u64) -> bool {
        self.group
            .index_of(g)
            .map(|i| self.indicator[i])
            .unwrap_or(false)
    }

    /// `g Phi`, again a CM-type.
    pub fn translate(&self, g: u64) -> CmType {
        let phi = self.group.translate(g, &self.phi);
        build(self.group.clone(), phi)
    }

    /// The smallest translate `g Phi` in lexicographic order.
    pub fn translation_class_representative(&self) -> CmType {
        self.group
            .elements()
            .iter()
            .map(|&g| self.translate(g))
            .min_by(|a, b| a.phi.cmp(&b.phi))
            .expect("groups are nonempty")
    }
}

fn build(group: Arc<FinAbGroup>, phi: Vec<u64>) -> CmType {
    let mut indicator = vec![false; group.order()];
    for &g in &phi {
        indicator[group.index_of(g).expect("validated element")] = true;
    }
    CmType {
        group,
        phi,
        indicator,
    }
}

/// Checks that exactly one of `g`, `iota g` lies in `set` for every `g`.
pub fn validate_cm_type(group: &Arc<FinAbGroup>, set: &[u64]) -> Result<CmType> {
    let mut phi = set
        .iter()
        .map(|&s| group.canonical(s))
        .collect::<Result<Vec<_>>>()?;
    phi.sort_unstable();
    phi.dedup();
    for &g in group.elements() {
        let conj = group.mul(group.conj(), g);
        let has = |x: u64| phi.binary_search(&x).is_ok();
        if has(g) == has(conj) {
            return Err(Error::NotACmType {
                witness: g,
                conjugate: conj,
            });
        }
    }
    Ok(build(group.clone(), phi))
}

fn check_fermat_triple(m: u64, a: [u64; 3]) -> Result<[u64; 3]> {
    if m < 3 {
        return invalid(format!("modulus must be at least 3, got {m}"));
    }
    let a = a.map(|x| x % m);
    if a.contains(&0) {
        return invalid(format!("Fermat exponents {a:?} must be nonzero modulo {m}"));
    }
    if (a[0] + a[1] + a[2]) % m != 0 {
        return invalid(format!("Fermat exponents {a:?} must sum to 0 modulo {m}"));
    }
    Ok(a)
}

/// `<t a0> + <t a1> + <t a2>` with least positive residues, `None` if some `t a_i = 0`.
fn fermat_sum(m: u64, t: u64, a: &[u64; 3]) -> Option<u64> {
    a.iter()
        .map(|&x| match (t * x) % m {
            0 => None,
            r => Some(r),
        })
        .sum()
}

/// `Phi_a = { t in (Z/m)^x : <t a0> + <t a1> + <t a2> = m }`.
pub fn fermat_cm_type(m: u64, a: [u64; 3]) -> Result<CmType> {
    let a = check_fermat_triple(m, a)?;
    let group = make_group(m, &[1])?;
    let phi: Vec<u64> = group
        .elements()
        .iter()
        .copied()
        .filter(|&t| fermat_sum(m, t, &a) == Some(m))
        .collect();
    validate_cm_type(&group, &phi)
}

/// Non-units `t` that satisfy the Fermat defining equation. These are left
/// out of `Phi_a`; callers surface them as a note.
pub fn fermat_nonunit_solutions(m: u64, a: [u64; 3]) -> Result<Vec<u64>> {
    let a = check_fermat_triple(m, a)?;
    Ok((1..m)
        .filter(|t| t.gcd(&m) != 1)
        .filter(|&t| fermat_sum(m, t, &a) == Some(m))
        .collect())
}

/// `{ g : g Phi = Phi }`
pub fn stabilizer(cm: &CmType) -> Vec<u64> {
    let group = &cm.group;
    group
        .elements()
        .iter()
        .copied()
        .filter(|&g| cm.phi.iter().all(|&s| cm.contains(group.mul(g, s))))
        .collect()
}

pub fn is_primitive(cm: &CmType) -> bool {
    stabilizer(cm) == [1]
}

/// Every CM-type of `group`, `2^(|G|/2)` of them, in a fixed order.
pub fn enumerate_cm_types(group: &Arc<FinAbGroup>) -> Vec<CmType> {
    let pairs: Vec<(u64, u64)> = group
        .elements()
        .iter()
        .map(|&g| (g, group.mul(group.conj(), g)))
        .filter(|&(g, c)| g < c)
        .collect();
    let n = pairs.len();
    assert!(n < 32, "too many CM-types to enumerate");
    (0u64..1 << n)
        .map(|mask| {
            let mut phi: Vec<u64> = pairs
                .iter()
                .enumerate()
                .map(|(i, &(g, c))| if mask >> i & 1 == 0 { g } else { c })
                .collect();
            phi.sort_unstable();
            build(group.clone(), phi)
        })
        .collect()
}
