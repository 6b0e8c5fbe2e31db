//! Scalar abstractions.
//!
//! [`Scalar`] is the field the polynomial machinery runs over: `f32`, `f64`,
//! or [`BigRational`] for exact evaluation of identities. [`Real`] adds the
//! floating-point operations needed by eigen-solvers. [`TwoFloat`]
//! (double-double) sits in between: sums and products carry about 106 bits,
//! division only about 53, and it stays cheap where rationals grow with the
//! degree.

use std::fmt::Debug;

use ndarray::{LinalgScalar, ScalarOperand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};
use twofloat::TwoFloat;

/// An ordered field usable by the polynomial and detection code.
pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Arithmetic is exact: no rounding, no need for re-orthogonalization.
    const EXACT: bool;

    /// Converts an `f64` literal. Exact for rational scalars.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("finite literal")
    }

    fn from_count(v: usize) -> Self {
        Self::from_usize(v).expect("count fits scalar")
    }

    /// Lossy view as `f64`, for reporting.
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn modulus(&self) -> Self {
        Signed::abs(self)
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;
}

impl Scalar for f64 {
    const EXACT: bool = false;
}

impl Scalar for TwoFloat {
    const EXACT: bool = false;

    // the crate's FromPrimitive::from_f64 truncates to an integer
    fn lit(v: f64) -> Self {
        TwoFloat::from(v)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn lit(v: f64) -> Self {
        BigRational::from_float(v).expect("finite literal")
    }

    fn from_count(v: usize) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

/// Floating-point scalar for spectral computations.
pub trait Real: Scalar + Float + LinalgScalar + ScalarOperand {}

impl Real for f32 {}
impl Real for f64 {}

/// Relative-or-absolute closeness: `|a - b| <= tol * max(1, |b|)`.
pub fn close<T: Scalar>(a: &T, b: &T, tol: f64) -> bool {
    let scale = if b.modulus() > T::one() { b.modulus() } else { T::one() };
    (a.clone() - b.clone()).modulus() <= T::lit(tol) * scale
}

/// The error `|a - b| / max(1, |b|)` as an `f64`.
pub fn scaled_error<T: Scalar>(a: &T, b: &T) -> f64 {
    let scale = if b.modulus() > T::one() { b.modulus() } else { T::one() };
    ((a.clone() - b.clone()).modulus() / scale).approx()
}
