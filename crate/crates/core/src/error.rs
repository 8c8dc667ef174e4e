use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("number of points {0} is not a multiple of 4")]
    BadPointCount(usize),
    #[error("matching is not a fixed-point-free involution: {0}")]
    NotAnInvolution(String),
    #[error("surgery on the matching yields {0} circles")]
    SurgeryDisconnects(usize),
    #[error("bad genus {0}")]
    BadGenus(usize),
    #[error("operands live over different algebras: {0}")]
    ParentMismatch(String),
    #[error("refinement data does not land in the small grading group: {0}")]
    NotInSmallGroup(String),
    #[error("grading violation: {0}")]
    GradingViolation(String),
    #[error("structure equation fails: {0}")]
    StructureViolation(String),
    #[error("side tags do not pair: {0}")]
    TagMismatch(String),
    #[error("neither factor is bounded on the paired side")]
    UnboundedPair,
    #[error("structure is not operationally bounded")]
    UnboundedInput,
    #[error("cancellation did not terminate")]
    NonTerminating,
    #[error("sequence is not Massey admissible: {0}")]
    NotAdmissible(String),
    #[error("no solution to the defining system: {0}")]
    NoSolution(String),
    #[error("domain does not connect the generators: {0}")]
    NotConnecting(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
