//! The survival function `h_{n,f}(k) = ⌊k/n⌋·f + (k − ⌊k/n⌋·n + f − n)⁺`.
//!
//! `h_{n,f}(N)` is the best survival time any schedule can guarantee against
//! a worst-case adversary. Evaluation is exact and generic over primitive
//! integer types; `usize` wrappers cover the common case.

use std::fmt::Display;

use num_traits::PrimInt;

use crate::error::{Error, Result};
use crate::game::GameParams;

/// Arguments of the survival function.
///
/// `f = 0` is accepted: the formula then yields 0 everywhere, which the
/// two-pool bound relies on for degenerate splits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HArgs<I = usize> {
    pub n: I,
    pub f: I,
    pub k: I,
}

impl<I: PrimInt + Display> HArgs<I> {
    pub fn new(n: I, f: I, k: I) -> Result<Self> {
        let zero = I::zero();
        if n <= zero {
            return Err(Error::InvalidParams(format!("n must be positive, got {n}")));
        }
        if f < zero || f >= n {
            return Err(Error::InvalidParams(format!("need 0 <= f < n, got f={f}, n={n}")));
        }
        if k < zero {
            return Err(Error::InvalidParams(format!("k must be nonnegative, got {k}")));
        }
        Ok(Self { n, f, k })
    }

    pub fn eval(&self) -> I {
        let full = self.k / self.n;
        let rem = self.k - full * self.n;
        // rem + f - n may be negative; compare before subtracting so unsigned
        // types never underflow.
        let tail = if rem + self.f > self.n {
            rem + self.f - self.n
        } else {
            I::zero()
        };
        full * self.f + tail
    }
}

/// Generic evaluation of `h_{n,f}(k)`.
pub fn h<I: PrimInt + Display>(n: I, f: I, k: I) -> Result<I> {
    HArgs::new(n, f, k).map(|a| a.eval())
}

/// `h_{n,f}(k)` on `usize`.
pub fn h_eval(n: usize, f: usize, k: usize) -> Result<usize> {
    h(n, f, k)
}

/// Optimum worst-case survival time `T_opt = h_{n,f}(N)`.
pub fn optimum_survival_time(params: &GameParams) -> usize {
    HArgs {
        n: params.set_size(),
        f: params.faults(),
        k: params.pool_size(),
    }
    .eval()
}

/// The naive bound `N − n + f + 1`: past it fewer than `n − f` processors
/// remain alive.
pub fn apriori_upper_bound(params: &GameParams) -> usize {
    params.pool_size() - params.set_size() + params.faults() + 1
}
