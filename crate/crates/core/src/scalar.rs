//! Numeric scalar used for ranking scores and alignment scores.
//!
//! Everything that adds up scores (rule ranking, program scores, alignment
//! scoring) is written against [`Scalar`] so the same code runs on `f32`,
//! `f64`, or exact rationals. Rationals are handy in tests where float
//! rounding would blur ties between equally ranked rules.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// A signed, totally-comparable-in-practice number.
pub trait Scalar:
    Copy + Debug + Display + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// `num / den`, exact when the scalar type can represent it.
    fn ratio(num: i64, den: i64) -> Self {
        let n = Self::from_i64(num).expect("numerator out of range");
        let d = Self::from_i64(den).expect("denominator out of range");
        n / d
    }

    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("integer out of range")
    }

    /// Lossy conversion used for reports.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Total order; incomparable values (NaN) compare equal.
    fn cmp_score(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }
}

// Scores are sums of a few decimal constants, so two ranks that are equal
// in exact arithmetic can differ in the last bits. Comparing on a fine grid
// keeps those ties and stays a total order.
fn quantized(v: f64, step: f64) -> f64 {
    (v / step).round()
}

impl Scalar for f32 {
    fn cmp_score(&self, other: &Self) -> Ordering {
        quantized(f64::from(*self), 1e-4).partial_cmp(&quantized(f64::from(*other), 1e-4)).unwrap_or(Ordering::Equal)
    }
}

impl Scalar for f64 {
    fn cmp_score(&self, other: &Self) -> Ordering {
        quantized(*self, 1e-9).partial_cmp(&quantized(*other, 1e-9)).unwrap_or(Ordering::Equal)
    }
}
impl Scalar for Ratio<i64> {}
