//! Reduction of a CM abelian variety at an unramified prime `p`.
//!
//! The Frobenius germ of the reduction is described by its slope function
//! `s(t) = s_pi(t P)` on the primes `t P` above `p`. With `D` the
//! decomposition group (generated by `p mod m`) and `f = |D|`,
//!
//! ```text
//! s(t) = (1/f) * #{ h in D : h t^-1 in Phi }
//! ```
//!
//! Slopes are kept as integer numerators over the common denominator `f`.
//! The centre `E0` of the endomorphism algebra of the simple factor is the
//! fixed field of the germ stabilizer `G1`; nondegeneracy is then decided
//! by an odd-character test over `G/G1` and by the rank of the Frobenius
//! condition lattice.

use std::sync::Arc;

use serde::Serialize;

use crate::arith::modular::is_prime;
use crate::cm_type::{is_primitive, CmType};
use crate::error::{invalid, Error, Result};
use crate::generic_fiber::{
    analyze_generic, in_lefschetz_relations, vanishes, GenericVerdict, Method, Witness,
};
use crate::group::{characters_trivial_on, cyclic_subgroup, make_group, FinAbGroup};
use crate::lattice::{kernel_basis_exact, kernel_rank_exact, IntMatrix};

/// `s(t) = numer(t) / denom` for every element `t` of `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeFunction {
    group: Arc<FinAbGroup>,
    denom: u64,
    // indexed like group.elements()
    numer: Vec<u64>,
}

impl SlopeFunction {
    pub fn group(&self) -> &Arc<FinAbGroup> {
        &self.group
    }

    /// `f = |D|`
    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn numer(&self, t: u64) -> u64 {
        self.numer[self.group.index_of(t).expect("slope of a non-unit")]
    }

    /// `(numerator, denominator)` in lowest terms.
    pub fn value(&self, t: u64) -> (u64, u64) {
        use num_integer::Integer;
        let n = self.numer(t);
        let g = n.gcd(&self.denom);
        (n / g, self.denom / g)
    }

    /// `(t, numer(t))` in element order.
    pub fn numerators(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.group
            .elements()
            .iter()
            .copied()
            .zip(self.numer.iter().copied())
    }

    /// `s(t) + s(iota t) = 1` for all `t`.
    pub fn is_symmetric(&self) -> bool {
        self.numerators()
            .all(|(t, n)| n + self.numer(self.group.mul(self.group.conj(), t)) == self.denom)
    }
}

fn check_prime(group: &FinAbGroup, p: u64) -> Result<()> {
    if !is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    if group.modulus().is_multiple_of(p) {
        return Err(Error::RamifiedPrime {
            p,
            modulus: group.modulus(),
        });
    }
    Ok(())
}

/// The decomposition group of a prime above `p`: the image of `<p mod m>`.
pub fn decomposition_subgroup(group: &FinAbGroup, p: u64) -> Result<Vec<u64>> {
    check_prime(group, p)?;
    cyclic_subgroup(group, p % group.modulus())
}

/// Slopes from the averaged formula `(1/f) sum_{h in D} phi(h t^-1)`.
pub fn slope_keyp(cm: &CmType, p: u64) -> Result<SlopeFunction> {
    let group = cm.group();
    let decomposition = decomposition_subgroup(group, p)?;
    let numer = group
        .elements()
        .iter()
        .map(|&t| {
            let t_inv = group.inv(t);
            decomposition
                .iter()
                .filter(|&&h| cm.indicator(group.mul(h, t_inv)))
                .count() as u64
        })
        .collect();
    Ok(SlopeFunction {
        group: group.clone(),
        denom: decomposition.len() as u64,
        numer,
    })
}

/// Slopes by direct counting, `|Phi(tP)| / |Sigma_E(tP)|`, where
/// `Sigma_E(tP)` holds the embeddings `f` with `tP = f^-1 P`, i.e. `f t in D`.
pub fn slope_shimura_taniyama(cm: &CmType, p: u64) -> Result<SlopeFunction> {
    let group = cm.group();
    check_prime(group, p)?;
    let frob = group.canonical(p % group.modulus())?;
    let in_decomposition = |x: u64| {
        let mut y = 1;
        loop {
            if y == x {
                return true;
            }
            y = group.mul(y, frob);
            if y == 1 {
                return false;
            }
        }
    };
    let mut denom = 0;
    let mut numer = Vec::with_capacity(group.order());
    for &t in group.elements() {
        let sigma: Vec<u64> = group
            .elements()
            .iter()
            .copied()
            .filter(|&f| in_decomposition(group.mul(f, t)))
            .collect();
        denom = sigma.len() as u64;
        numer.push(sigma.iter().filter(|&&f| cm.contains(f)).count() as u64);
    }
    Ok(SlopeFunction {
        group: group.clone(),
        denom,
        numer,
    })
}

/// `G1 = { g : s(t g) = s(t) for all t }`, the Galois group of `E/E0`.
pub fn germ_stabilizer(s: &SlopeFunction) -> Vec<u64> {
    let group = &s.group;
    group
        .elements()
        .iter()
        .copied()
        .filter(|&g| s.numerators().all(|(t, n)| s.numer(group.mul(t, g)) == n))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ReductionStatus {
    Nondegenerate,
    Degenerate,
    /// `iota` fixes the germ, so `E0` is totally real and has no odd
    /// characters. Outside the odd-character criterion's hypotheses.
    VacuouslyNondegenerate,
}

impl ReductionStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ReductionStatus::Nondegenerate => "Nondegenerate",
            ReductionStatus::Degenerate => "Degenerate",
            ReductionStatus::VacuouslyNondegenerate => "VacuouslyNondegenerate",
        }
    }

    pub fn is_degenerate(self) -> bool {
        self == ReductionStatus::Degenerate
    }
}

#[derive(Clone, Debug)]
pub struct ReductionVerdict {
    pub method: Method,
    pub p: u64,
    /// `|D|`, the residue degree of `p` in `E`.
    pub f: u64,
    pub decomposition: Vec<u64>,
    pub g1: Vec<u64>,
    /// `[E0 : Q] = |G| / |G1|`
    pub e0_degree: usize,
    pub status: ReductionStatus,
    pub witness: Option<Witness>,
    /// Odd characters of `G/G1` with vanishing slope sum.
    pub vanishing_count: usize,
    /// Lattice test only.
    pub kernel_rank: Option<usize>,
    pub slopes: SlopeFunction,
    pub primitive: bool,
}

impl ReductionVerdict {
    pub fn outside_rs2_hypotheses(&self) -> bool {
        self.status == ReductionStatus::VacuouslyNondegenerate
    }
}

struct Germ {
    slopes: SlopeFunction,
    decomposition: Vec<u64>,
    g1: Vec<u64>,
}

fn germ(cm: &CmType, p: u64) -> Result<Germ> {
    let decomposition = decomposition_subgroup(cm.group(), p)?;
    let slopes = slope_keyp(cm, p)?;
    let g1 = germ_stabilizer(&slopes);
    Ok(Germ {
        slopes,
        decomposition,
        g1,
    })
}

#[allow(clippy::too_many_arguments)]
fn verdict(
    method: Method,
    cm: &CmType,
    p: u64,
    germ: Germ,
    status: ReductionStatus,
    witness: Option<Witness>,
    vanishing_count: usize,
    kernel_rank: Option<usize>,
) -> ReductionVerdict {
    ReductionVerdict {
        method,
        p,
        f: germ.decomposition.len() as u64,
        e0_degree: cm.group().order() / germ.g1.len(),
        decomposition: germ.decomposition,
        g1: germ.g1,
        status,
        witness,
        vanishing_count,
        kernel_rank,
        slopes: germ.slopes,
        primitive: is_primitive(cm),
    }
}

/// Odd-character test on the reduction: for every odd `chi` of `G` trivial
/// on `G1`, `sum_{t in G} numer(t) chi(t)` must not vanish. This is the
/// slope sum over `G/G1` scaled by `f |G1|`.
pub fn rs2_test(cm: &CmType, p: u64) -> Result<ReductionVerdict> {
    let germ = germ(cm, p)?;
    let group = cm.group();
    if germ.g1.contains(&group.conj()) {
        return Ok(verdict(
            Method::CharacterSum,
            cm,
            p,
            germ,
            ReductionStatus::VacuouslyNondegenerate,
            None,
            0,
            None,
        ));
    }
    let mut witness = None;
    let mut vanishing_count = 0;
    for chi in characters_trivial_on(group, &germ.g1)? {
        if !chi.is_odd() {
            continue;
        }
        if vanishes(&chi, group, |t| germ.slopes.numer(t))? {
            vanishing_count += 1;
            witness.get_or_insert(Witness::Character(chi));
        }
    }
    let status = if vanishing_count == 0 {
        ReductionStatus::Nondegenerate
    } else {
        ReductionStatus::Degenerate
    };
    Ok(verdict(
        Method::CharacterSum,
        cm,
        p,
        germ,
        status,
        witness,
        vanishing_count,
        None,
    ))
}

/// The Frobenius condition matrix over `G0 = G/G1`:
/// `M[t][s] = f * s0(s^-1 t)`. Returns `G0` alongside.
pub fn frobenius_condition_matrix(
    slopes: &SlopeFunction,
    g1: &[u64],
) -> Result<(Arc<FinAbGroup>, IntMatrix<i64>)> {
    let group = slopes.group();
    let g0 = make_group(group.modulus(), &group.preimage(g1)?)?;
    let elems = g0.elements();
    let m = IntMatrix::from_fn(elems.len(), elems.len(), |i, j| {
        let s_inv = g0.inv(elems[j]);
        slopes.numer(g0.mul(s_inv, elems[i])) as i64
    });
    Ok((g0, m))
}

/// Rank criterion on the Lefschetz and Frobenius character lattices of the reduction.
pub fn p_lattice_test(cm: &CmType, p: u64) -> Result<ReductionVerdict> {
    let germ = germ(cm, p)?;
    if germ.g1.contains(&cm.group().conj()) {
        return Ok(verdict(
            Method::Lattice,
            cm,
            p,
            germ,
            ReductionStatus::VacuouslyNondegenerate,
            None,
            0,
            None,
        ));
    }
    let (g0, m) = frobenius_condition_matrix(&germ.slopes, &germ.g1)?;
    let relations_rank = g0.order() / 2 - 1;
    let kernel_rank = kernel_rank_exact(&m);
    if kernel_rank < relations_rank {
        return Err(Error::Inconsistent(format!(
            "Frobenius kernel rank {kernel_rank} below rank N0 = {relations_rank}"
        )));
    }
    let (status, witness) = if kernel_rank == relations_rank {
        (ReductionStatus::Nondegenerate, None)
    } else {
        let w = kernel_basis_exact(&m)
            .into_iter()
            .find(|v| !in_lefschetz_relations(&g0, v))
            .ok_or_else(|| {
                Error::Inconsistent("Frobenius kernel exceeds N0 without a witness".into())
            })?;
        (ReductionStatus::Degenerate, Some(Witness::LatticeVector(w)))
    };
    Ok(verdict(
        Method::Lattice,
        cm,
        p,
        germ,
        status,
        witness,
        kernel_rank - relations_rank,
        Some(kernel_rank),
    ))
}

/// Both reduction tests; fails with [`Error::Inconsistent`] if they disagree.
pub fn analyze_reduction(cm: &CmType, p: u64) -> Result<(ReductionVerdict, ReductionVerdict)> {
    let chars = rs2_test(cm, p)?;
    let lattice = p_lattice_test(cm, p)?;
    if chars.status != lattice.status || chars.vanishing_count != lattice.vanishing_count {
        return Err(Error::Inconsistent(format!(
            "p = {p}: character test says {} ({} vanishing), lattice test says {} (kernel rank {:?})",
            chars.status.as_str(),
            chars.vanishing_count,
            lattice.status.as_str(),
            lattice.kernel_rank
        )));
    }
    Ok((chars, lattice))
}

/// Outcome of one applicable consistency check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Check {
    Pass,
    Fail,
    NotApplicable,
}

impl Check {
    fn of(applicable: bool, holds: bool) -> Check {
        match (applicable, holds) {
            (false, _) => Check::NotApplicable,
            (true, true) => Check::Pass,
            (true, false) => Check::Fail,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConsistencyReport {
    pub p: u64,
    pub generic: GenericVerdict,
    pub reduction: ReductionVerdict,
    /// `f = 1` and `Phi` primitive: the two verdicts coincide.
    pub equal_at_split_primes: Check,
    /// A nondegenerate generic fiber has no degenerate reduction.
    pub nondegeneracy_descends: Check,
    /// Both slope formulas agree entrywise.
    pub slope_formulas_agree: Check,
    /// `s(t) + s(iota t) = 1`.
    pub slope_symmetry: Check,
    /// The decomposition group lies in `G1`.
    pub decomposition_in_g1: Check,
}

impl ConsistencyReport {
    pub fn pass(&self) -> bool {
        [
            self.equal_at_split_primes,
            self.nondegeneracy_descends,
            self.slope_formulas_agree,
            self.slope_symmetry,
            self.decomposition_in_g1,
        ]
        .iter()
        .all(|&c| c != Check::Fail)
    }
}

/// Runs all four oracles at `p` and checks the relations between the generic
/// and special fibers.
pub fn mt_consistency(cm: &CmType, p: u64) -> Result<ConsistencyReport> {
    let (generic, _) = analyze_generic(cm)?;
    let (reduction, _) = analyze_reduction(cm, p)?;
    let st = slope_shimura_taniyama(cm, p)?;
    let split = reduction.f == 1 && reduction.primitive;
    let generic_nd = generic.nondegenerate;
    let reduction_nd = reduction.status == ReductionStatus::Nondegenerate;
    let g1 = &reduction.g1;
    Ok(ConsistencyReport {
        p,
        equal_at_split_primes: Check::of(split, generic_nd == reduction_nd),
        nondegeneracy_descends: Check::of(generic_nd, !reduction.status.is_degenerate()),
        slope_formulas_agree: Check::of(true, st == reduction.slopes),
        slope_symmetry: Check::of(true, reduction.slopes.is_symmetric()),
        decomposition_in_g1: Check::of(
            true,
            reduction.decomposition.iter().all(|d| g1.contains(d)),
        ),
        generic,
        reduction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cm_type::{enumerate_cm_types, fermat_cm_type, validate_cm_type};
    use crate::generic_fiber::ns2_test;

    fn fermat27() -> CmType {
        fermat_cm_type(27, [1, 9, 17]).unwrap()
    }

    #[test]
    fn decomposition_groups() {
        let cm = fermat27();
        let g = cm.group();
        assert_eq!(decomposition_subgroup(g, 109).unwrap(), vec![1]);
        assert_eq!(decomposition_subgroup(g, 31).unwrap().len(), 9);
        assert_eq!(
            decomposition_subgroup(g, 3).unwrap_err(),
            Error::RamifiedPrime { p: 3, modulus: 27 }
        );
        assert!(matches!(
            decomposition_subgroup(g, 91),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn split_prime_slopes_are_the_indicator() {
        let cm = fermat27();
        let s = slope_keyp(&cm, 109).unwrap();
        assert_eq!(s.denom(), 1);
        for &t in cm.group().elements() {
            assert_eq!(s.numer(t), u64::from(cm.indicator(cm.group().inv(t))));
        }
        assert_eq!(slope_shimura_taniyama(&cm, 109).unwrap(), s);
        assert_eq!(germ_stabilizer(&s), vec![1]);
    }

    #[test]
    fn inert_prime_gives_half_slopes() {
        // 29 = 2 mod 27 generates (Z/27)^x
        let cm = fermat27();
        let s = slope_keyp(&cm, 29).unwrap();
        assert_eq!(s.denom(), 18);
        assert!(s.numerators().all(|(_, n)| n == 9));
        assert_eq!(germ_stabilizer(&s).len(), 18);
        assert_eq!(
            rs2_test(&cm, 29).unwrap().status,
            ReductionStatus::VacuouslyNondegenerate
        );
    }

    #[test]
    fn order_nine_prime() {
        let cm = fermat27();
        let s = slope_keyp(&cm, 31).unwrap();
        assert_eq!(s.denom(), 9);
        assert_eq!(s.value(1), (2, 3));
        assert_eq!(s.value(26), (1, 3));
        assert_eq!(slope_shimura_taniyama(&cm, 31).unwrap(), s);
        assert_eq!(germ_stabilizer(&s), vec![1, 4, 7, 10, 13, 16, 19, 22, 25]);

        let (chars, lattice) = analyze_reduction(&cm, 31).unwrap();
        assert_eq!(chars.status, ReductionStatus::Nondegenerate);
        assert_eq!((chars.f, chars.g1.len(), chars.e0_degree), (9, 9, 2));
        assert_eq!(lattice.kernel_rank, Some(0));

        let (_, m) = frobenius_condition_matrix(&s, &chars.g1).unwrap();
        assert_eq!(m, IntMatrix::new(2, 2, vec![6, 3, 3, 6]).unwrap());
    }

    #[test]
    fn split_prime_is_degenerate() {
        let cm = fermat27();
        let (chars, lattice) = analyze_reduction(&cm, 109).unwrap();
        assert_eq!(chars.status, ReductionStatus::Degenerate);
        assert_eq!(lattice.status, ReductionStatus::Degenerate);
        assert_eq!(chars.f, 1);
        assert!(matches!(chars.witness, Some(Witness::Character(_))));
        assert!(matches!(lattice.witness, Some(Witness::LatticeVector(_))));
        let report = mt_consistency(&cm, 109).unwrap();
        assert!(report.pass());
        assert_eq!(report.equal_at_split_primes, Check::Pass);
        assert_eq!(report.nondegeneracy_descends, Check::NotApplicable);
    }

    #[test]
    fn cm_elliptic_curve_reductions() {
        let g = make_group(4, &[1]).unwrap();
        let cm = validate_cm_type(&g, &[1]).unwrap();
        let (v, _) = analyze_reduction(&cm, 5).unwrap();
        assert_eq!(v.status, ReductionStatus::Nondegenerate);
        assert_eq!((v.f, v.g1.clone()), (1, vec![1]));

        let (v, l) = analyze_reduction(&cm, 7).unwrap();
        assert_eq!(v.status, ReductionStatus::VacuouslyNondegenerate);
        assert_eq!(l.status, ReductionStatus::VacuouslyNondegenerate);
        assert!(v.outside_rs2_hypotheses());
        assert_eq!(v.slopes.value(1), (1, 2));

        for p in [5, 7] {
            let r = mt_consistency(&cm, p).unwrap();
            assert!(r.pass(), "p={p}");
            assert_eq!(r.nondegeneracy_descends, Check::Pass);
        }
    }

    #[test]
    fn ramified_primes_rejected_everywhere() {
        let cm = fermat27();
        let err = Error::RamifiedPrime { p: 3, modulus: 27 };
        assert_eq!(slope_keyp(&cm, 3).unwrap_err(), err);
        assert_eq!(slope_shimura_taniyama(&cm, 3).unwrap_err(), err);
        assert_eq!(rs2_test(&cm, 3).unwrap_err(), err);
        assert_eq!(p_lattice_test(&cm, 3).unwrap_err(), err);
        assert_eq!(mt_consistency(&cm, 3).unwrap_err(), err);
    }

    #[test]
    fn slope_invariants_small_groups() {
        for m in [5u64, 7, 8, 9, 12, 13] {
            let g = make_group(m, &[1]).unwrap();
            for cm in enumerate_cm_types(&g) {
                for p in crate::arith::modular::primes_in(2, 120) {
                    if m % p == 0 {
                        continue;
                    }
                    let s = slope_keyp(&cm, p).unwrap();
                    assert_eq!(slope_shimura_taniyama(&cm, p).unwrap(), s);
                    assert!(s.is_symmetric());
                    let g1 = germ_stabilizer(&s);
                    assert!(crate::group::is_subgroup(&g, &g1));
                    for d in decomposition_subgroup(&g, p).unwrap() {
                        assert!(g1.contains(&d));
                    }
                    // constant on decomposition cosets
                    for (t, n) in s.numerators() {
                        for d in decomposition_subgroup(&g, p).unwrap() {
                            assert_eq!(s.numer(g.mul(d, t)), n);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn nondegenerate_quintic_never_degenerates() {
        let g = make_group(5, &[1]).unwrap();
        let cm = validate_cm_type(&g, &[1, 2]).unwrap();
        assert!(ns2_test(&cm).unwrap().nondegenerate);
        for p in crate::arith::modular::primes_in(2, 300) {
            if p == 5 {
                continue;
            }
            let (v, _) = analyze_reduction(&cm, p).unwrap();
            assert!(!v.status.is_degenerate(), "p={p}");
        }
    }
}
