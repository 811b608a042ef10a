use thiserror::Error;

/// Errors raised by graph construction, classification, search and I/O.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid edge {{{0}, {1}}}: self-loops are not allowed")]
    InvalidEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("{{{0}, {1}}} is not an edge")]
    NotAnEdge(usize, usize),
    #[error("Cartesian product factor has no vertices")]
    EmptyFactor,
    #[error("operation requires at least one vertex")]
    EmptyGraph,
    #[error("{0} vertices exceeds the supported maximum of {max}", max = crate::graph::MAX_VERTICES)]
    TooManyVertices(usize),
    #[error("{n} vertices cannot be split into {parts} equal parts")]
    IndivisibleParts { n: usize, parts: usize },
    #[error("unknown named graph '{0}'")]
    UnknownGraph(String),
    #[error("invalid recipe: {0}")]
    InvalidRecipe(String),
    #[error("no {degree}-regular graph on {n} vertices: n * degree is odd")]
    ParityError { n: usize, degree: usize },
    #[error("degree {degree} must be smaller than the vertex count {n}")]
    DegreeTooLarge { n: usize, degree: usize },
    #[error("{n} vertices exceeds the enumeration cap of {cap}")]
    DeskScaleExceeded { n: usize, cap: usize },
    #[error("format error: {0}")]
    FormatError(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidEdge(..) => "InvalidEdge",
            Error::VertexOutOfRange { .. } => "VertexOutOfRange",
            Error::NotAnEdge(..) => "NotAnEdge",
            Error::EmptyFactor => "EmptyFactor",
            Error::EmptyGraph => "EmptyGraph",
            Error::TooManyVertices(_) => "TooManyVertices",
            Error::IndivisibleParts { .. } => "IndivisibleParts",
            Error::UnknownGraph(_) => "UnknownGraph",
            Error::InvalidRecipe(_) => "InvalidRecipe",
            Error::ParityError { .. } => "ParityError",
            Error::DegreeTooLarge { .. } => "DegreeTooLarge",
            Error::DeskScaleExceeded { .. } => "DeskScaleExceeded",
            Error::FormatError(_) => "FormatError",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
