//! Scalar abstraction: the whole library is generic over the floating-point
//! type through this trait, with `f64` aliases exported at the crate root.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Floating-point scalar usable everywhere in this crate: `f32` or `f64`.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive + Send + Sync + 'static {
    /// Lift an `f64` constant (tolerances, literals) into the scalar type.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant not representable")
    }

    /// `true` when the value is neither NaN nor infinite.
    fn is_finite_real(self) -> bool {
        self.to_f64().is_some_and(f64::is_finite)
    }

    /// Render through `f64` (used by the wire formats).
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar not representable as f64")
    }
}

impl<T: RealField + Copy + FromPrimitive + ToPrimitive + Send + Sync + 'static> Real for T {}
