//! Serializable report projections. Field order here is the JSON key order.

use nondegen_core::{
    stabilizer, CmType, ConsistencyReport, FinAbGroup, GenericVerdict, ReductionVerdict, Witness,
};
use num_bigint::BigInt;
use serde::Serialize;

use crate::job::JobSpec;

pub const TOOL: &str = "nondegen";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize, Debug, Clone)]
pub struct JobEcho {
    pub command: &'static str,
    pub modulus: u64,
    pub kernel: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub primes: Vec<u64>,
    pub spec: String,
}

impl JobEcho {
    pub fn new(job: &JobSpec) -> JobEcho {
        let mut canonical = job.clone();
        // output placement does not change the analysis
        canonical.out = None;
        canonical.threads = None;
        JobEcho {
            command: job.command.name(),
            modulus: job.modulus,
            kernel: job.kernel.clone(),
            phi: job.phi_text(),
            primes: job.prime_list(),
            spec: canonical.to_string(),
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct GroupInfo {
    pub order: usize,
    pub conjugation: u64,
    pub exponent: u64,
    pub generators: Vec<u64>,
}

impl GroupInfo {
    pub fn new(g: &FinAbGroup) -> GroupInfo {
        GroupInfo {
            order: g.order(),
            conjugation: g.conj(),
            exponent: g.exponent(),
            generators: g.base().generators().to_vec(),
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct CmTypeInfo {
    pub phi: Vec<u64>,
    pub size: usize,
    pub primitive: bool,
    pub stabilizer: Vec<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub nonunit_solutions: Vec<u64>,
}

impl CmTypeInfo {
    pub fn new(cm: &CmType, nonunit_solutions: Vec<u64>) -> CmTypeInfo {
        let stab = stabilizer(cm);
        CmTypeInfo {
            phi: cm.phi().to_vec(),
            size: cm.phi().len(),
            primitive: stab == [1],
            stabilizer: stab,
            nonunit_solutions,
        }
    }
}

/// Integers as JSON numbers when they fit in `i64`, decimal strings otherwise.
#[derive(Serialize, Debug, Clone, PartialEq)]
#[serde(untagged)]
pub enum IntList {
    Small(Vec<i64>),
    Big(Vec<String>),
}

impl IntList {
    fn new(v: &[BigInt]) -> IntList {
        match nondegen_core::generic_fiber::witness_vector_i64(v) {
            Some(small) => IntList::Small(small),
            None => IntList::Big(v.iter().map(ToString::to_string).collect()),
        }
    }
}

#[derive(Serialize, Debug, Clone, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessInfo {
    /// `chi(g_i) = zeta_e^exponents[i]` on the generators of `(Z/m)^x`.
    Character {
        exponents: Vec<u64>,
        value_order: u64,
        order: u64,
    },
    /// Coefficients indexed by the group elements in ascending order.
    LatticeVector { elements: Vec<u64>, vector: IntList },
}

impl WitnessInfo {
    pub fn new(w: &Witness, elements: &[u64]) -> WitnessInfo {
        match w {
            Witness::Character(chi) => WitnessInfo::Character {
                exponents: chi.exponents().to_vec(),
                value_order: chi.value_order(),
                order: chi.order(),
            },
            Witness::LatticeVector(v) => WitnessInfo::LatticeVector {
                elements: elements.to_vec(),
                vector: IntList::new(v),
            },
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct GenericTestInfo {
    pub nondegenerate: bool,
    pub vanishing_count: usize,
    pub kernel_rank: usize,
    pub witness: Option<WitnessInfo>,
}

impl GenericTestInfo {
    pub fn new(v: &GenericVerdict, elements: &[u64]) -> GenericTestInfo {
        GenericTestInfo {
            nondegenerate: v.nondegenerate,
            vanishing_count: v.vanishing_count,
            kernel_rank: v.kernel_rank,
            witness: v.witness.as_ref().map(|w| WitnessInfo::new(w, elements)),
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct GenericInfo {
    pub status: &'static str,
    pub nondegenerate: bool,
    #[serde(rename = "dim_L")]
    pub dim_l: usize,
    #[serde(rename = "dim_MT")]
    pub dim_mt: usize,
    pub relations_rank: usize,
    pub hypothesis_violation: Option<&'static str>,
    pub character_test: GenericTestInfo,
    pub lattice_test: GenericTestInfo,
}

pub fn generic_status(nondegenerate: bool) -> &'static str {
    if nondegenerate {
        "Nondegenerate"
    } else {
        "Degenerate"
    }
}

impl GenericInfo {
    pub fn new(
        group: &FinAbGroup,
        chars: &GenericVerdict,
        lattice: &GenericVerdict,
    ) -> GenericInfo {
        let elements = group.elements();
        GenericInfo {
            status: generic_status(lattice.nondegenerate),
            nondegenerate: lattice.nondegenerate,
            dim_l: lattice.dim_l,
            dim_mt: lattice.dim_mt,
            relations_rank: group.order() / 2 - 1,
            hypothesis_violation: lattice.hypothesis_violation(),
            character_test: GenericTestInfo::new(chars, elements),
            lattice_test: GenericTestInfo::new(lattice, elements),
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct SlopeEntry {
    pub element: u64,
    pub numerator: u64,
}

#[derive(Serialize, Debug, Clone)]
pub struct ReductionTestInfo {
    pub status: &'static str,
    pub vanishing_count: usize,
    pub kernel_rank: Option<usize>,
    pub witness: Option<WitnessInfo>,
}

impl ReductionTestInfo {
    pub fn new(v: &ReductionVerdict, elements: &[u64]) -> ReductionTestInfo {
        ReductionTestInfo {
            status: v.status.as_str(),
            vanishing_count: v.vanishing_count,
            kernel_rank: v.kernel_rank,
            witness: v.witness.as_ref().map(|w| WitnessInfo::new(w, elements)),
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct ConsistencyInfo {
    pub pass: bool,
    pub equal_at_split_primes: nondegen_core::Check,
    pub nondegeneracy_descends: nondegen_core::Check,
    pub slope_formulas_agree: nondegen_core::Check,
    pub slope_symmetry: nondegen_core::Check,
    pub decomposition_in_g1: nondegen_core::Check,
}

impl ConsistencyInfo {
    pub fn new(r: &ConsistencyReport) -> ConsistencyInfo {
        ConsistencyInfo {
            pass: r.pass(),
            equal_at_split_primes: r.equal_at_split_primes,
            nondegeneracy_descends: r.nondegeneracy_descends,
            slope_formulas_agree: r.slope_formulas_agree,
            slope_symmetry: r.slope_symmetry,
            decomposition_in_g1: r.decomposition_in_g1,
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct ReductionInfo {
    pub p_mod_m: u64,
    pub f: u64,
    pub decomposition_group: Vec<u64>,
    pub g1: Vec<u64>,
    pub g1_order: usize,
    pub e0_degree: usize,
    pub status: &'static str,
    pub outside_rs2_hypotheses: bool,
    pub slope_denominator: u64,
    pub slopes: Vec<SlopeEntry>,
    pub character_test: ReductionTestInfo,
    pub lattice_test: ReductionTestInfo,
    pub consistency: ConsistencyInfo,
}

impl ReductionInfo {
    pub fn new(
        modulus: u64,
        chars: &ReductionVerdict,
        lattice: &ReductionVerdict,
        consistency: &ConsistencyReport,
        g0_elements: &[u64],
    ) -> ReductionInfo {
        let group_elements = chars.slopes.group().elements();
        ReductionInfo {
            p_mod_m: chars.p % modulus,
            f: chars.f,
            decomposition_group: chars.decomposition.clone(),
            g1_order: chars.g1.len(),
            g1: chars.g1.clone(),
            e0_degree: chars.e0_degree,
            status: chars.status.as_str(),
            outside_rs2_hypotheses: chars.outside_rs2_hypotheses(),
            slope_denominator: chars.slopes.denom(),
            slopes: chars
                .slopes
                .numerators()
                .map(|(element, numerator)| SlopeEntry { element, numerator })
                .collect(),
            character_test: ReductionTestInfo::new(chars, group_elements),
            lattice_test: ReductionTestInfo::new(lattice, g0_elements),
            consistency: ConsistencyInfo::new(consistency),
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct ReductionEntry {
    pub p: u64,
    pub error: Option<String>,
    #[serde(flatten)]
    pub result: Option<ReductionInfo>,
}

#[derive(Serialize, Debug, Clone)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub job: JobEcho,
    pub group: GroupInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cm_type: Option<CmTypeInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generic: Option<GenericInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reductions: Option<Vec<ReductionEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enumeration: Option<EnumerationInfo>,
}

/// One CSV row of a prime scan.
#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct ScanRow {
    pub p: u64,
    pub p_mod_m: u64,
    pub f: u64,
    pub g1_order: usize,
    pub e0_degree: usize,
    pub status: &'static str,
}

#[derive(Serialize, Debug, Clone, Default)]
pub struct StatusCounts {
    #[serde(rename = "Nondegenerate")]
    pub nondegenerate: usize,
    #[serde(rename = "Degenerate")]
    pub degenerate: usize,
    #[serde(rename = "VacuouslyNondegenerate")]
    pub vacuously_nondegenerate: usize,
}

impl StatusCounts {
    pub fn add(&mut self, status: &str) {
        match status {
            "Nondegenerate" => self.nondegenerate += 1,
            "Degenerate" => self.degenerate += 1,
            _ => self.vacuously_nondegenerate += 1,
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct ScanInfo {
    pub rows: Vec<ScanRow>,
    pub counts: StatusCounts,
}

#[derive(Serialize, Debug, Clone)]
pub struct EnumeratedType {
    pub phi: Vec<u64>,
    pub primitive: bool,
    pub nondegenerate: bool,
    pub vanishing_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_size: Option<usize>,
}

#[derive(Serialize, Debug, Clone)]
pub struct EnumerationInfo {
    pub up_to_translation: bool,
    pub total: usize,
    pub primitive: usize,
    pub imprimitive: usize,
    pub nondegenerate: usize,
    pub degenerate: usize,
    pub types: Vec<EnumeratedType>,
}
