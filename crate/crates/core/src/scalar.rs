use std::fmt::{Debug, Display};

use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed};

/// Ordered field used by the matrix-game solver.
///
/// `tolerance` is the threshold below which a pivot candidate counts as zero:
/// zero for exact types, a small epsilon for floats.
pub trait Scalar: Clone + Debug + Display + Num + Signed + PartialOrd + FromPrimitive {
    fn tolerance() -> Self;

    fn from_count(k: usize) -> Self {
        Self::from_usize(k).expect("count representable in scalar")
    }

    fn is_positive_beyond_tol(&self) -> bool {
        *self > Self::tolerance()
    }

    fn is_negative_beyond_tol(&self) -> bool {
        *self < -Self::tolerance()
    }
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    fn tolerance() -> Self {
        1e-5
    }
}

impl Scalar for BigRational {
    fn tolerance() -> Self {
        BigRational::from_integer(0.into())
    }
}

// Fixed-width rationals overflow quickly on larger games; fine for tiny ones.
impl Scalar for Ratio<i64> {
    fn tolerance() -> Self {
        Ratio::from_integer(0)
    }
}
