//! Numeric backbone shared by every module.
//!
//! All arithmetic is generic over [`Scalar`], implemented for `f32`, `f64`
//! and exact rationals ([`Exact`]). Floating types compare with an absolute
//! tolerance; the rational type compares exactly.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::{Num, Signed};

/// Exact rational scalar. Grid values `j/m` are represented without rounding.
pub type Exact = Ratio<i64>;

pub trait Scalar:
    Num + Signed + Copy + PartialOrd + Debug + Display + Send + Sync + 'static
{
    /// Absolute tolerance used for every equality and ordering test.
    fn tolerance() -> Self;

    /// Converts `num / den` to the scalar type. `den` must be positive.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Lossy conversion from `f64`; `None` for non-finite input.
    fn from_f64(value: f64) -> Option<Self>;

    fn to_f64(self) -> f64;

    fn half() -> Self {
        Self::from_ratio(1, 2)
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn clamp_unit(self) -> Self {
        self.max_of(Self::zero()).min_of(Self::one())
    }
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-12
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_f64(value: f64) -> Option<Self> {
        value.is_finite().then_some(value)
    }

    fn to_f64(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    // f32 grid arithmetic accumulates error near 1e-7 after a few folds.
    fn tolerance() -> Self {
        1e-5
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        (num as f64 / den as f64) as f32
    }

    fn from_f64(value: f64) -> Option<Self> {
        value.is_finite().then_some(value as f32)
    }

    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for Exact {
    fn tolerance() -> Self {
        Ratio::from_integer(0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }

    fn from_f64(value: f64) -> Option<Self> {
        Ratio::approximate_float(value)
    }

    fn to_f64(self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

/// `a == b` up to the scalar tolerance.
pub fn approx_eq<T: Scalar>(a: T, b: T) -> bool {
    (a - b).abs() <= T::tolerance()
}

/// Total comparison that treats values within tolerance as equal.
pub fn cmp_tol<T: Scalar>(a: T, b: T) -> Ordering {
    if approx_eq(a, b) {
        Ordering::Equal
    } else if a < b {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// `a <= b` up to tolerance.
pub fn le_tol<T: Scalar>(a: T, b: T) -> bool {
    a <= b + T::tolerance()
}

/// Parses a decimal or `p/q` literal straight into `T`.
pub fn parse_scalar<T: Scalar>(text: &str) -> Option<T> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: i64 = p.trim().parse().ok()?;
        let q: i64 = q.trim().parse().ok()?;
        if q <= 0 {
            return None;
        }
        return Some(T::from_ratio(p, q));
    }
    let value: f64 = text.parse().ok()?;
    T::from_f64(value)
}
