use thiserror::Error;

use crate::game::ScheduleViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid schedule: {0}")]
    Schedule(#[from] ScheduleViolation),

    #[error("invalid adversary: {0}")]
    Adversary(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("instance is not in P: {0}")]
    NotInP(String),

    #[error("search budget of {max_states} states exceeded")]
    BudgetExceeded { max_states: u64 },

    #[error("instance too large: {0}")]
    TooLarge(String),
}
