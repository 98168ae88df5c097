use thiserror::Error;

/// Errors raised by the exact-arithmetic layer and the nondegeneracy tests.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The kernel subgroup contains -1, so the fixed field is not a CM field.
    #[error("invalid CM field: -1 mod {modulus} lies in the kernel subgroup")]
    InvalidCmField { modulus: u64 },

    /// Both or neither of `witness` and its complex conjugate lie in the candidate set.
    #[error("not a CM-type: both or neither of {witness} and {conjugate} are present")]
    NotACmType { witness: u64, conjugate: u64 },

    #[error("prime {p} ramifies in Q(zeta_{modulus})")]
    RamifiedPrime { p: u64, modulus: u64 },

    #[error("cyclotomic orders differ ({left} vs {right})")]
    MixedOrders { left: u64, right: u64 },

    #[error("arithmetic overflow in fixed-width integer backend")]
    ArithmeticOverflow,

    /// Two independent computations that must agree did not.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
