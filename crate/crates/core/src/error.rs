use thiserror::Error;

/// Every failure mode of the library. The variant name doubles as the
/// machine-readable error name reported by the command-line tool.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("OutOfSpace: {0}")]
    OutOfSpace(String),
    #[error("PoleAtBase: {0}")]
    PoleAtBase(String),
    #[error("ParseError: {0}")]
    Parse(String),
    #[error("InvalidInput: {0}")]
    InvalidInput(String),
    #[error("UnsupportedQuotient: {0}")]
    UnsupportedQuotient(String),
    #[error("SpecMismatch: {0}")]
    SpecMismatch(String),
    #[error("NotUnipotent: {0}")]
    NotUnipotent(String),
    #[error("DegenerateSpec: {0}")]
    DegenerateSpec(String),
    #[error("NotClosedUnderD: {0}")]
    NotClosedUnderD(String),
    #[error("NotFlat: {0}")]
    NotFlat(String),
    #[error("NotReducible: {0}")]
    NotReducible(String),
    #[error("UnsupportedChart: {0}")]
    UnsupportedChart(String),
    #[error("NotGroupLike: {0}")]
    NotGroupLike(String),
    #[error("PoleOnV: {0}")]
    PoleOnV(String),
    #[error("NotARelation: {0}")]
    NotARelation(String),
    #[error("BadTwist: {0}")]
    BadTwist(String),
    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),
    #[error("InvalidData: {0}")]
    InvalidData(String),
    #[error("WrongField: {0}")]
    WrongField(String),
    #[error("LengthMismatch: {0}")]
    LengthMismatch(String),
    #[error("MissingFlag: {0}")]
    MissingFlag(String),
    #[error("SingularCurve: {0}")]
    SingularCurve(String),
    #[error("BadLeadingTerm: {0}")]
    BadLeadingTerm(String),
}

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::OutOfSpace(_) => "OutOfSpace",
            Error::PoleAtBase(_) => "PoleAtBase",
            Error::Parse(_) => "ParseError",
            Error::InvalidInput(_) => "InvalidInput",
            Error::UnsupportedQuotient(_) => "UnsupportedQuotient",
            Error::SpecMismatch(_) => "SpecMismatch",
            Error::NotUnipotent(_) => "NotUnipotent",
            Error::DegenerateSpec(_) => "DegenerateSpec",
            Error::NotClosedUnderD(_) => "NotClosedUnderD",
            Error::NotFlat(_) => "NotFlat",
            Error::NotReducible(_) => "NotReducible",
            Error::UnsupportedChart(_) => "UnsupportedChart",
            Error::NotGroupLike(_) => "NotGroupLike",
            Error::PoleOnV(_) => "PoleOnV",
            Error::NotARelation(_) => "NotARelation",
            Error::BadTwist(_) => "BadTwist",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::InvalidData(_) => "InvalidData",
            Error::WrongField(_) => "WrongField",
            Error::LengthMismatch(_) => "LengthMismatch",
            Error::MissingFlag(_) => "MissingFlag",
            Error::SingularCurve(_) => "SingularCurve",
            Error::BadLeadingTerm(_) => "BadLeadingTerm",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
