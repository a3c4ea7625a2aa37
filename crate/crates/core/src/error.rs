use thiserror::Error;

/// Errors raised by the melon library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid dimension {0}: supported range is 2..=16")]
    InvalidDimension(usize),

    #[error("color {color} is out of range for dimension {dim}")]
    ColorOutOfRange { color: usize, dim: usize },

    #[error("slot {slot} of node {node} is already occupied")]
    SlotOccupied { node: usize, slot: usize },

    #[error("no such node: {0}")]
    NoSuchNode(usize),

    #[error("the two nodes are identical; their distance is zero")]
    ZeroDistance,

    #[error("tree is not a simple melon")]
    NotSimple,

    #[error("enumeration of {count} objects exceeds the budget of {budget}")]
    TooLarge { count: String, budget: u64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("fit window too narrow: {0}")]
    WindowTooNarrow(String),

    #[error("series constant term is not invertible")]
    NotInvertible,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
