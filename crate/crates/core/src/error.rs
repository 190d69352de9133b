use std::fmt;

/// A failed identity check, rendered for error messages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailedCheck {
    pub identity: String,
    pub tuple: Vec<usize>,
    pub residual: Vec<String>,
}

impl fmt::Display for FailedCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tuple: Vec<String> = self.tuple.iter().map(|i| format!("e{}", i + 1)).collect();
        write!(f, "{} fails at ({}) with residual [{}]", self.identity, tuple.join(","), self.residual.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("unassigned symbols: {}", .0.join(", "))]
    MissingSymbol(Vec<String>),
    #[error("algebra has no operation named {0:?}")]
    MissingOp(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("truncation order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("map is not a derivation: {0}")]
    NotDerivation(FailedCheck),
    #[error("product is not commutative associative: {0}")]
    NotCommAssoc(FailedCheck),
    #[error("operation is not a Novikov product: {0}")]
    NotNovikov(FailedCheck),
    #[error("not a Novikov-Poisson algebra: {0}")]
    NotNovikovPoisson(FailedCheck),
    #[error("bracket is not a Lie bracket: {0}")]
    NotLie(FailedCheck),
    #[error("not a transposed Poisson algebra: {0}")]
    NotTpa(FailedCheck),
    #[error("vector is not a two-sided unit: {0}")]
    NotUnit(String),
    #[error("spanning vectors are linearly dependent")]
    DependentSpan,
    #[error("zeroth product is not commutative, so the commutator is not divisible by h")]
    NotCommutativeBase,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("constant terms match no catalog entry: {0}")]
    NotAQuantization(String),
    #[error("arity {0} is outside the tabulated range 1..=5")]
    OutOfRange(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
