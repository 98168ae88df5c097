//! Nondegeneracy of all powers of a CM abelian variety over `Q^alg` with
//! abelian CM field, decided two independent ways:
//!
//! * the odd-character test: every odd character `chi` of `G` must have
//!   `sum_{s in Phi} chi(s) != 0`;
//! * the lattice test: the character group of the Lefschetz group is
//!   `Z^G / N` with `N = { g : g = iota g, sum g = 0 }`, and a character is
//!   trivial on the Mumford-Tate group iff `sum_s phi(t^-1 s) g(s) = 0` for
//!   all `t`. Both groups have the same rank exactly when the kernel of that
//!   system has rank `|G|/2 - 1 = rank N`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::CycInt;
use crate::cm_type::{is_primitive, CmType};
use crate::error::{Error, Result};
use crate::group::{odd_characters, Character, FinAbGroup};
use crate::lattice::{kernel_basis_exact, kernel_rank_exact, IntMatrix};
use crate::scalar::{with_fallback, ExactInt};

/// Evidence of degeneracy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// An odd character whose weighted sum vanishes.
    Character(Character),
    /// An integer character of the Lefschetz torus, outside `N`, that is
    /// trivial on the smaller group. Indexed like `group.elements()`.
    LatticeVector(Vec<BigInt>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Copy)]
pub enum Method {
    CharacterSum,
    Lattice,
}

#[derive(Clone, Debug)]
pub struct GenericVerdict {
    pub method: Method,
    pub nondegenerate: bool,
    pub witness: Option<Witness>,
    /// Odd characters with vanishing sum; the lattice test infers it from the kernel rank.
    pub vanishing_count: usize,
    /// Rank of the kernel of the Mumford-Tate condition matrix.
    pub kernel_rank: usize,
    pub dim_l: usize,
    pub dim_mt: usize,
    pub primitive: bool,
}

impl GenericVerdict {
    /// Set when `Phi` is imprimitive: the variety is then not simple and
    /// the criterion's hypotheses fail.
    pub fn hypothesis_violation(&self) -> Option<&'static str> {
        (!self.primitive).then_some("not simple")
    }
}

/// `sum_{s in Phi} chi(s)` in `Z[zeta_e]`.
pub fn character_sum<T: ExactInt>(chi: &Character, cm: &CmType) -> Result<CycInt<T>> {
    weighted_character_sum(chi, cm.group(), |g| u64::from(cm.indicator(g)))
}

/// `sum_{g in G} weight(g) chi(g)`.
pub(crate) fn weighted_character_sum<T: ExactInt>(
    chi: &Character,
    group: &Arc<FinAbGroup>,
    weight: impl Fn(u64) -> u64,
) -> Result<CycInt<T>> {
    if chi.group() != group {
        return Err(Error::InvalidInput(
            "character and CM-type live on different groups".into(),
        ));
    }
    let e = chi.value_order() as usize;
    let mut counts = vec![0u64; e];
    for &g in group.elements() {
        counts[chi.exponent_at(g)? as usize] += weight(g);
    }
    let counts = counts
        .into_iter()
        .map(|c| T::from_u64(c).ok_or(Error::ArithmeticOverflow))
        .collect::<Result<Vec<T>>>()?;
    group.value_ring().from_power_coeffs(counts)
}

pub(crate) fn vanishes(
    chi: &Character,
    group: &Arc<FinAbGroup>,
    weight: impl Fn(u64) -> u64 + Copy,
) -> Result<bool> {
    with_fallback(
        || weighted_character_sum::<i64>(chi, group, weight).map(|s| s.is_zero()),
        || weighted_character_sum::<BigInt>(chi, group, weight).map(|s| s.is_zero()),
    )
}

fn lefschetz_dims(order: usize, kernel_rank: usize) -> Result<(usize, usize)> {
    let dim_l = order / 2 + 1;
    let dim_mt = order.saturating_sub(kernel_rank);
    if dim_mt > dim_l {
        return Err(Error::Inconsistent(format!(
            "kernel rank {kernel_rank} is below rank N = {}",
            order / 2 - 1
        )));
    }
    Ok((dim_l, dim_mt))
}

/// Odd-character criterion.
pub fn ns2_test(cm: &CmType) -> Result<GenericVerdict> {
    let group = cm.group();
    let mut witness = None;
    let mut vanishing_count = 0;
    for chi in odd_characters(group) {
        if vanishes(&chi, group, |g| u64::from(cm.indicator(g)))? {
            vanishing_count += 1;
            witness.get_or_insert(Witness::Character(chi));
        }
    }
    // rank-Fourier: every nontrivial even character vanishes on Phi
    let kernel_rank = group.order() / 2 - 1 + vanishing_count;
    let (dim_l, dim_mt) = lefschetz_dims(group.order(), kernel_rank)?;
    Ok(GenericVerdict {
        method: Method::CharacterSum,
        nondegenerate: vanishing_count == 0,
        witness,
        vanishing_count,
        kernel_rank,
        dim_l,
        dim_mt,
        primitive: is_primitive(cm),
    })
}

/// The Mumford-Tate condition matrix `M[t][s] = phi(t^-1 s)`.
pub fn mt_condition_matrix(cm: &CmType) -> IntMatrix<i64> {
    let group = cm.group();
    let elems = group.elements();
    IntMatrix::from_fn(elems.len(), elems.len(), |i, j| {
        let t_inv = group.inv(elems[i]);
        i64::from(cm.indicator(group.mul(t_inv, elems[j])))
    })
}

/// `g = iota g` and `sum g = 0`: the relations killed in the Lefschetz character group.
pub(crate) fn in_lefschetz_relations(group: &FinAbGroup, v: &[BigInt]) -> bool {
    let symmetric = group.elements().iter().enumerate().all(|(i, &g)| {
        let j = group.index_of(group.mul(group.conj(), g)).expect("unit");
        v[i] == v[j]
    });
    symmetric && v.iter().sum::<BigInt>().is_zero()
}

pub(crate) fn lattice_witness(group: &FinAbGroup, m: &IntMatrix<i64>) -> Option<Witness> {
    kernel_basis_exact(m)
        .into_iter()
        .find(|v| !in_lefschetz_relations(group, v))
        .map(Witness::LatticeVector)
}

/// Rank criterion on the Lefschetz and Mumford-Tate character lattices.
pub fn mt_lattice_test(cm: &CmType) -> Result<GenericVerdict> {
    let group = cm.group();
    let n = group.order();
    let m = mt_condition_matrix(cm);
    let kernel_rank = kernel_rank_exact(&m);
    let (dim_l, dim_mt) = lefschetz_dims(n, kernel_rank)?;
    let nondegenerate = kernel_rank == n / 2 - 1;
    let witness = if nondegenerate {
        None
    } else {
        let w = lattice_witness(group, &m);
        if w.is_none() {
            return Err(Error::Inconsistent(
                "kernel exceeds rank N but every basis vector lies in N".into(),
            ));
        }
        w
    };
    Ok(GenericVerdict {
        method: Method::Lattice,
        nondegenerate,
        witness,
        vanishing_count: kernel_rank - (n / 2 - 1),
        kernel_rank,
        dim_l,
        dim_mt,
        primitive: is_primitive(cm),
    })
}

/// Runs both tests and fails with [`Error::Inconsistent`] if they disagree.
pub fn analyze_generic(cm: &CmType) -> Result<(GenericVerdict, GenericVerdict)> {
    let chars = ns2_test(cm)?;
    let lattice = mt_lattice_test(cm)?;
    if chars.nondegenerate != lattice.nondegenerate
        || chars.vanishing_count != lattice.vanishing_count
        || chars.dim_mt != lattice.dim_mt
    {
        return Err(Error::Inconsistent(format!(
            "character test (nondegenerate={}, vanishing={}) and lattice test \
             (nondegenerate={}, kernel rank={}) disagree",
            chars.nondegenerate, chars.vanishing_count, lattice.nondegenerate, lattice.kernel_rank
        )));
    }
    Ok((chars, lattice))
}

/// Witness vectors rendered as plain integers where they fit.
pub fn witness_vector_i64(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(ToPrimitive::to_i64).collect()
}
