//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum VendError {
    #[error("dimension mismatch on axis `{axis}`: expected {expected}, got {got}")]
    DimensionMismatch {
        axis: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("axis sets must be disjoint")]
    AxisOverlap,
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("infeasible constraint: {0}")]
    Infeasible(String),
    #[error("grid oracle budget exceeded: {points} points requested, budget is {budget}; reduce resolution or alphabet sizes")]
    BudgetExceeded { points: u128, budget: u128 },
    #[error("side-information kernel is not of Markov form Y-A-X: {0}")]
    NotMarkov(String),
    #[error("objective is not finite: {0}")]
    NonFinite(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, VendError>;
