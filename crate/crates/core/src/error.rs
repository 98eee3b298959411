use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} is out of range for a graph with {vertex_count} vertices")]
    InvalidVertex { vertex: usize, vertex_count: usize },

    #[error("king torus needs at least 3 rows and 3 columns, got {rows}x{cols}")]
    Dimension { rows: usize, cols: usize },

    #[error("format error: {0}")]
    Format(String),

    #[error("vertex {vertex} is not a detector")]
    NotADetector { vertex: usize },

    #[error("vertex {vertex} is outside the detection region of detector {detector}")]
    OutsideRegion { vertex: usize, detector: usize },

    #[error("share of detector {detector} is undefined: vertex {vertex} is not dominated")]
    UndefinedShare { detector: usize, vertex: usize },

    #[error("lifted torus {rows}x{cols} is smaller than 5x5 and does not model the infinite grid")]
    NonFaithful { rows: usize, cols: usize },

    #[error("{what} needs {required} units of work, over the budget of {budget}")]
    Budget { what: &'static str, required: u128, budget: u128 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }
}
