use thiserror::Error;

use crate::phases::PhaseId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseMovesError {
    #[error("unknown move token {token:?} at position {position}")]
    UnknownToken { position: usize, token: String },
    #[error("illegal suffix in move token {token:?} at position {position}")]
    IllegalSuffix { position: usize, token: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseStateError {
    #[error("expected 96 stickers, found {0}")]
    WrongLength(usize),
    #[error("unknown color letter {letter:?} at sticker {index}")]
    UnknownColor { index: usize, letter: char },
    #[error("stickers do not form a cube: {0}")]
    NotAPiece(String),
    #[error("invalid state: {}", .0.join(", "))]
    Invalid(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("phase {phase} exceeded its depth cap of {cap}")]
    DepthCapExceeded { phase: PhaseId, cap: u8 },
    #[error("phase {phase} exhausted the node budget")]
    BudgetExhausted { phase: PhaseId },
    #[error("solution failed verification after phase {phase}")]
    VerificationFailed { phase: PhaseId },
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad magic bytes")]
    BadMagic,
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("cache is for phase {found}, expected {expected}")]
    WrongPhase { expected: u8, found: u8 },
    #[error("table dimensions do not match: {0}")]
    Dimensions(String),
    #[error("cache contents failed validation")]
    Corrupt,
}
