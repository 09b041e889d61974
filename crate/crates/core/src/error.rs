use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("internal degree {degree} exceeds the degree bound {bound}")]
    DegreeOutOfBound { degree: usize, bound: usize },

    #[error("degree bound must be even, got {0}")]
    OddDegreeBound(usize),

    #[error("element is not homogeneous of internal degree {0}")]
    NotHomogeneous(usize),

    #[error("invalid generator index {0}")]
    InvalidGenerator(i64),

    #[error("e_{i} and e_{j} actions do not commute at internal degree {degree}")]
    NonCommutingActions { i: u32, j: u32, degree: usize },

    #[error("map is not equivariant for e_{generator} at internal degree {degree}")]
    NotEquivariant { generator: u32, degree: usize },

    #[error("induced action on a kernel is not solvable at internal degree {degree}")]
    KernelActionUnsolvable { degree: usize },

    #[error("matrix image of generator {0} is not invertible")]
    SingularImage(usize),

    #[error("relator {0} does not evaluate to identity")]
    RelatorNotIdentity(usize),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("serialization failed: {0}")]
    Serialization(String),

    #[error("{check} falsified at internal degree {degree}: {detail}")]
    Falsified {
        check: &'static str,
        degree: usize,
        detail: String,
    },
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
