//! Exact nondegeneracy tests for simple CM abelian varieties whose CM field
//! is abelian over `Q`, and for the simple factors of their reductions.
//!
//! A CM field is given as the fixed field of a subgroup `H` of
//! `(Z/mZ)^x`, so its Galois group is [`FinAbGroup`] `= (Z/mZ)^x / H` with
//! complex conjugation the class of `-1`. Every boolean answer is computed
//! twice, once from character sums in `Z[zeta_e]` and once from the rank of
//! an integer lattice, and the two are required to agree.
//!
//! Integer arithmetic is generic over [`ExactInt`]; the aliases below fix the
//! common backends. Fixed-width backends never wrap: they return
//! [`Error::ArithmeticOverflow`], and the top-level tests retry in `BigInt`.

pub mod arith;
pub mod cm_type;
pub mod error;
pub mod generic_fiber;
pub mod group;
pub mod lattice;
pub mod reduction;
pub mod scalar;

use num_bigint::BigInt;

pub use arith::{cyc_make, cyclotomic_polynomial, element_order, unit_group_structure};
pub use arith::{CycInt, CyclotomicRing, IntPolynomial, UnitGroupPresentation};
pub use cm_type::{
    enumerate_cm_types, fermat_cm_type, fermat_nonunit_solutions, is_primitive, stabilizer,
    validate_cm_type, CmType,
};
pub use error::{Error, Result};
pub use generic_fiber::{
    analyze_generic, character_sum, mt_lattice_test, ns2_test, GenericVerdict, Method, Witness,
};
pub use group::{
    characters_trivial_on, cyclic_subgroup, enumerate_characters, make_group, odd_characters,
    Character, FinAbGroup,
};
pub use lattice::{kernel_basis, kernel_rank, rank, IntMatrix};
pub use reduction::{
    analyze_reduction, decomposition_subgroup, germ_stabilizer, mt_consistency, p_lattice_test,
    rs2_test, slope_keyp, slope_shimura_taniyama, Check, ConsistencyReport, ReductionStatus,
    ReductionVerdict, SlopeFunction,
};
pub use scalar::{with_fallback, ExactInt};

pub type CycInt64 = CycInt<i64>;
pub type BigCycInt = CycInt<BigInt>;
pub type IntMatrix64 = IntMatrix<i64>;
pub type BigIntMatrix = IntMatrix<BigInt>;
pub type IntPolynomial64 = IntPolynomial<i64>;
pub type BigIntPolynomial = IntPolynomial<BigInt>;
