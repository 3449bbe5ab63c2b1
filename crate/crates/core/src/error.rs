use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("degree {0} is outside the supported range 1..={max}", max = crate::MAX_DEGREE)]
    UnsupportedDegree(usize),

    #[error("point {point} is outside [1..{degree}]")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("image list is not a bijection")]
    NotBijective,

    #[error("encoding {index} is out of range for degree {degree}")]
    EncodingOutOfRange { index: u64, degree: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown group label `{0}`")]
    UnknownGroup(String),

    #[error("group `{label}` is not defined on {degree} points")]
    GroupDegree { label: String, degree: usize },

    #[error("the group is not transitive")]
    NotTransitive,

    #[error("expected a singular transformation")]
    NotSingular,

    #[error("rank {rank} is outside 1..{degree}")]
    InvalidRank { rank: usize, degree: usize },

    #[error("{0}")]
    Unsupported(String),

    #[error("invalid set sizes i={i}, j={j} for degree {degree}")]
    InvalidSizes { i: usize, j: usize, degree: usize },

    #[error("bitmap for degree {degree} needs {bytes} bytes, above the limit of {limit}")]
    BitmapTooLarge {
        degree: usize,
        bytes: u64,
        limit: u64,
    },

    #[error("cache mismatch: {0}")]
    CacheMismatch(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
