use thiserror::Error;

/// Crate-wide error type. Validation failures carry enough context to
/// name the offending element or parameter in CLI messages.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(usize, usize),
    #[error("cannot parse element `{0}`: {1}")]
    Parse(String, String),
    #[error("n = {0} is too small, need n >= 3")]
    NTooSmall(usize),
    #[error("identity element is not allowed in a connection set")]
    IdentityInS,
    #[error("connection set is not inverse-closed: inverse of {0} is missing")]
    NotInverseClosed(String),
    #[error("duplicate element {0} in connection set")]
    DuplicateElement(String),
    #[error("malformed case: {0}")]
    MalformedCase(String),
    #[error("{0} is not a unit modulo {1}")]
    NonUnit(usize, usize),
    #[error("connection set {0:?} is not symmetric modulo {1}")]
    AsymmetricT(Vec<usize>, usize),
    #[error("permutation degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("point {0} out of range for degree {1}")]
    PointOutOfRange(usize, usize),
    #[error("size cap exceeded: instance has {actual} vertices, cap is {cap}")]
    SizeCapExceeded { actual: usize, cap: usize },
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("affine map (u={u}, v={v}) does not preserve the connection set")]
    MapDoesNotPreserveS { u: usize, v: usize },
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
