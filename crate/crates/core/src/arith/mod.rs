//! Exact arithmetic substrate: modular arithmetic, unit-group structure,
//! cyclotomic polynomials and the rings `Z[zeta_e]`.

pub mod cyclotomic;
pub mod modular;
pub mod poly;

pub use cyclotomic::{cyc_make, CycInt, CyclotomicRing};
pub use modular::{element_order, unit_group_structure, UnitGroupPresentation};
pub use poly::{cyclotomic_polynomial, IntPolynomial};
