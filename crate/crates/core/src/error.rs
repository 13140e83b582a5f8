use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("no irreducible polynomial of degree {m} over F_{p}")]
    NoIrreducibleFound { p: u64, m: u32 },
    #[error("operation needs a nonzero polynomial")]
    ZeroPolynomial,
    #[error("division is not part of the normalizing rewrite system; use SymElem::inv")]
    DivisionRequested,
    #[error("element is not invertible: {0}")]
    NotInvertible(String),
    #[error("bad reduction: {0}")]
    BadReduction(String),
    #[error("no admissible prime found below {bound}")]
    NoPrimeFound { bound: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("singular family member: e^3 = -27")]
    SingularMember,
    #[error("group structure mismatch: {0}")]
    StructureMismatch(String),
    #[error("symbolic identity fails: {0}")]
    IdentityFails(String),
    #[error("curves {0} and {1} share a component in reduction")]
    CommonComponent(String, String),
    #[error("degenerate Gram matrix")]
    Degenerate,
    #[error("lattice is not even")]
    NotEven,
    #[error("too large for brute force: {0}")]
    TooLarge(String),
    #[error("sublattice basis does not have full rank")]
    NotFullRank,
    #[error("intersection matrix has rank {found}, expected {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("class is not integral in the lattice basis: {0}")]
    NonIntegralClass(String),
    #[error("matrix does not preserve the Gram form: {0}")]
    NotIsometry(String),
    #[error("linear system has no solution: {0}")]
    NoSolution(String),
    #[error("group closure exceeded {0} elements")]
    ClosureBudgetExceeded(usize),
    #[error("enumeration too large: {0}")]
    EnumerationTooLarge(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("resource budget exceeded: {0}")]
    ResourceBudgetExceeded(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Configuration and resource problems exit with 2, mathematical failures with 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::Io(_)
            | Error::Json(_)
            | Error::ResourceBudgetExceeded(_)
            | Error::TooLarge(_)
            | Error::EnumerationTooLarge(_)
            | Error::ClosureBudgetExceeded(_)
            | Error::NoPrimeFound { .. }
            | Error::Precondition(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
