//! Worst-case survival of a redundant system drawn from a processor pool.
//!
//! A scheduler picks, for every time step, a set of `n` processors out of a
//! pool of `N`. After each step one processor fails and only the fact that a
//! failure happened is reported. The system keeps working while at most `f`
//! of the processors currently in use have failed. This crate computes
//!
//! * the optimum guaranteed survival time `h_{n,f}(N)` ([`survival`]),
//! * the batch schedule that attains it ([`game::trivial_schedule`]),
//! * a minimal killing adversary for any schedule via bipartite matchings
//!   ([`solver`], backed by [`matching`]),
//! * brute-force oracles that re-derive all of the above on small inputs
//!   ([`oracle`]),
//! * the two-pool lower bound and the exact value of the randomized game
//!   against an on-line adversary ([`extensions`]).
//!
//! The arithmetic in [`survival`] is generic over primitive integers and the
//! matrix-game solver in [`lp`] is generic over an ordered field
//! ([`Scalar`]); the aliases below fix the concrete types the rest of the
//! crate and the CLI use.

#![forbid(unsafe_code)]

pub mod error;
pub mod extensions;
pub mod game;
pub mod lp;
pub mod matching;
pub mod oracle;
pub mod scalar;
pub mod solver;
pub mod survival;

pub use error::{Error, Result};
pub use game::{Adversary, GameParams, Schedule, ScheduleViolation};
pub use matching::{BipartiteGraph, DeficiencyWitness, Matching, Side};
pub use scalar::Scalar;

/// Exact rational used for game values.
pub type Rational = num_rational::BigRational;

/// Game value in exact arithmetic; this is what the CLI reports.
pub type ExactGameValue = extensions::GameValue<Rational>;

/// Game value in double precision, for quick experiments.
pub type ApproxGameValue = extensions::GameValue<f64>;

/// Matrix-game solution in exact arithmetic.
pub type ExactMatrixSolution = lp::MatrixGameSolution<Rational>;
