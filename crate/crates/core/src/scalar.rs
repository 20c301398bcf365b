//! Scalar abstraction shared by every numerical routine.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};
use twofloat::TwoFloat;

/// Real scalar usable by the lattice and calculus routines.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Panics only if the target cannot represent finite literals.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Converts an integer.
    #[inline]
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer literal")
    }

    /// Lossy conversion used for reporting.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
impl Real for TwoFloat {}

/// Scalars that also drive FFT plans.
pub trait FftReal: Real + rustfft::FftNum {}

impl FftReal for f32 {}
impl FftReal for f64 {}

/// Double-double scalar used to re-evaluate near-resonant phases.
pub type Extended = TwoFloat;
