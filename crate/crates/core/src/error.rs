use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("coordinate index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },
    #[error("division by a transcendental (tau-dependent) expression")]
    TranscendentalDivisor,
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular locus: {0}")]
    SingularLocus(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("not a cocycle: delta c has {0} nonzero components")]
    NotACocycle(usize),
    #[error("not a cycle")]
    NotACycle,
    #[error("size cap exceeded: {what} needs {needed} basis elements, cap is {cap}")]
    CapExceeded { what: String, needed: u128, cap: usize },
    #[error("not closed under the bracket: {0}")]
    NotClosed(String),
    #[error("not a Lie algebra homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("element {0} does not centralize the cycle")]
    NotCentralizing(usize),
    #[error("not a potential: d(alpha) differs from omega")]
    NotAPotential,
    #[error("not invariant under basis element {0}")]
    NotInvariant(String),
    #[error("action does not preserve omega: {0}")]
    NotMultisymplectic(String),
    #[error("non-Hamiltonian pair at position {0}")]
    NonHamiltonian(usize),
    #[error("field at position {0} carries no Lie algebra tag")]
    Untagged(usize),
    #[error("algebra has no matrix representation")]
    NoRepresentation,
    #[error("model is not a unit sphere with its volume form: {0}")]
    NotSphereVolume(String),
    #[error("omega has transcendental coefficients")]
    TranscendentalForm,
    #[error("degenerate parameter: {0}")]
    Degenerate(String),
    #[error("unknown case: {0}")]
    UnknownCase(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("numeric error: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
