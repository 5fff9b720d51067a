use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("cannot parse permutation {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("variable count mismatch: {left} vs {right}")]
    NvarsMismatch { left: usize, right: usize },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("nonzero remainder in exact division by x{j} - x{}", j + 1)]
    NonzeroRemainder { j: usize },

    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,

    #[error("illegal move at ({row},{col}): {reason}")]
    IllegalMove {
        row: usize,
        col: usize,
        reason: MoveError,
    },

    #[error("permutation {0} is not vexillary")]
    NotVexillary(String),

    #[error("size {requested} exceeds the configured bound {bound}")]
    BoundExceeded { requested: usize, bound: usize },

    #[error("cell ({0},{1}) is not a blank tile")]
    NotBlank(usize, usize),

    #[error("set function is not submodular")]
    NotSubmodular,

    #[error("empty point set")]
    EmptyPointSet,

    #[error("singular linear system")]
    Singular,

    #[error("fill count {k} exceeds the maximum {max}")]
    FillOutOfRange { k: usize, max: usize },

    #[error("dead-square vector exceeds f_top in column {0}")]
    DeadCountOutOfRange(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no witness found: {0}")]
    NoWitness(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

/// Why a bubbling or K-bubbling move was refused.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveError {
    NoSquare,
    SourceDead,
    TopRow,
    TargetOccupied,
    NegativeRank,
    EqualRankDeadInRow,
}

impl std::fmt::Display for MoveError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            MoveError::NoSquare => "no square at source",
            MoveError::SourceDead => "source square is dead",
            MoveError::TopRow => "source square is in the top row",
            MoveError::TargetOccupied => "target square is occupied",
            MoveError::NegativeRank => "rank would become negative",
            MoveError::EqualRankDeadInRow => "a dead square of equal rank sits in the same row",
        };
        f.write_str(s)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
