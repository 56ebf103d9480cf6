use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("denominator is not invertible modulo {0}")]
    NonInvertibleDenominator(u64),
    #[error("generator index {index} exceeds rank {rank}")]
    RankExceeded { index: usize, rank: usize },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("requested depth {requested} is below element depth {depth}")]
    DepthTooSmall { requested: usize, depth: usize },
    #[error("module is zero")]
    ZeroModule,
    #[error("could not certify simplicity within the search budget")]
    UnresolvedSimplicity,
    #[error("polynomial is not comonic")]
    NotComonic,
    #[error("polynomial is a unit")]
    IsUnit,
    #[error("membership test exhausted its budget")]
    UnresolvedMembership,
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("no quotient supported on words of length <= {0}")]
    NotDivisibleWithinBound(usize),
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("polynomial has zero augmentation")]
    ZeroAugmentation,
    #[error("search space too large: about {0} candidates")]
    SearchSpaceTooLarge(u128),
    #[error("corpus format error at line {line}: {msg}")]
    CorpusFormat { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Outcomes that are honest "could not decide within budget" verdicts.
    pub fn is_bounded_verdict(&self) -> bool {
        matches!(
            self,
            Error::BudgetExhausted(_)
                | Error::UnresolvedSimplicity
                | Error::NotDivisibleWithinBound(_)
                | Error::UnresolvedMembership
                | Error::SearchSpaceTooLarge(_)
        )
    }

    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}
