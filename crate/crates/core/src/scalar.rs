//! Floating point scalar abstraction.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the geometry is computed in: `f32` or `f64`.
///
/// The associated tolerances are the absolute bands used by constructors and
/// degeneracy checks. They are tied to the precision of the type, so `f32`
/// gets proportionally wider bands than `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Band on `|‖v‖ − 1|` and `|⟨v,v⟩ + 1|` inside which points are re-normalized.
    const NORMALIZATION_TOL: f64;
    /// Cross-product magnitude below which two points do not span a geodesic.
    const DEGENERACY_TOL: f64;
    /// Relative slack below which an Euler-type inequality counts as violated.
    const REALIZABILITY_TOL: f64;
    /// Distance to `π/2` inside which a spherical circumradius is a great circle.
    const RIGHT_ANGLE_TOL: f64;

    /// Converts an `f64` literal into this scalar.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Lossy conversion to `f64` for reporting.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    /// Clamps into `[-1, 1]`; used before `asin`/`acos`.
    #[inline]
    fn clamp_unit(self) -> Self {
        self.max(-Self::one()).min(Self::one())
    }
}

impl Scalar for f64 {
    const NORMALIZATION_TOL: f64 = 1e-9;
    const DEGENERACY_TOL: f64 = 1e-12;
    const REALIZABILITY_TOL: f64 = 1e-12;
    const RIGHT_ANGLE_TOL: f64 = 1e-9;
}

impl Scalar for f32 {
    const NORMALIZATION_TOL: f64 = 1e-5;
    const DEGENERACY_TOL: f64 = 1e-6;
    const REALIZABILITY_TOL: f64 = 1e-5;
    const RIGHT_ANGLE_TOL: f64 = 1e-4;
}
