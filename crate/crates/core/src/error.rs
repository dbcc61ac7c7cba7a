use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid action table: {0}")]
    InvalidAction(String),
    #[error("permutation degree {degree} exceeds cap {cap}")]
    DegreeOverflow { degree: usize, cap: usize },
    #[error("{what}: {value} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: u128,
        cap: u128,
    },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("value is not p-integral (denominator divisible by {0})")]
    NotPIntegral(u64),
    #[error("acting group does not normalize the subgroup")]
    NotNormalized,
    #[error("group is not abelian")]
    NotAbelian,
    #[error("no defect class found for block {0}")]
    NoDefectClass(usize),
    #[error("ambiguous block match during Brauer induction")]
    AmbiguousMatch,
    #[error("hyperfocal methods disagree: commutator order {commutator}, residual order {residual}")]
    MethodDisagreement { commutator: u128, residual: u128 },
    #[error("no odd-order complement found: {0}")]
    NoComplementFound(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("element is not in the group")]
    NotInGroup,
    #[error("{0} is not prime")]
    NotPrime(u64),
}

impl Error {
    /// Errors that signal a broken invariant rather than bad input or a size cap.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::InternalInconsistency(_)
                | Error::NoDefectClass(_)
                | Error::AmbiguousMatch
                | Error::MethodDisagreement { .. }
                | Error::NoComplementFound(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
