use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("cannot parse word literal at offset {offset}: {msg}")]
    WordSyntax { offset: usize, msg: String },

    #[error("not in the index-two subgroup: Coxeter word has odd length {0}")]
    OddCoxeterWord(usize),

    #[error("word must be nonempty")]
    EmptyWord,

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("cone angle must lie in (0, 2π), got {0}")]
    ConeAngle(String),

    #[error("invalid Fricke point: {0}")]
    InvalidPoint(String),

    #[error("reducible locus: κ = {0} is not below 2")]
    ReducibleLocus(String),

    #[error("Coxeter extension is inconsistent: {0}")]
    CoxeterSigns(String),

    #[error("determinant {0} is too far from 1")]
    Determinant(String),

    #[error("outside geometric locus: {0}")]
    OutsideLocus(String),

    #[error("expected an {expected} isometry, got {found}")]
    WrongIsometryType { expected: &'static str, found: String },

    #[error("off the curve's footprint: {0}")]
    OffCurve(String),

    #[error("loci do not intersect in the Fricke space: {0}")]
    NoIntersection(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("cannot parse polynomial: {0}")]
    PolySyntax(String),

    #[error("cannot parse real number {0:?}")]
    RealSyntax(String),
}
