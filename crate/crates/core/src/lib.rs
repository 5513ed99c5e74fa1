//! Geometry of bisectors, simplex resolving sets and norm classification in
//! finite-dimensional real normed spaces.
//!
//! The crate is organised around four pillars:
//!
//! * [`norms`] — the norm abstraction (`NormSpec`) and unit-ball probes:
//!   support contacts, flat-segment detection, parallelogram defect,
//!   strict-convexity probing.
//! * [`bisector`] — everything about the equidistant set `B(x, y)`:
//!   membership, intersection with lines parallel to the segment,
//!   bounding-region computation, flat-ray cones, slab fitting and the
//!   reflection-isometry check.
//! * [`resolve`] — anchor simplices, multilateration over their convex hull,
//!   resolving-set checks and constructive counterexample synthesis in 2D
//!   and 3D, with lifting to higher dimensions.
//! * [`gauss`] — the projective Gauss map of a 3D unit ball, homogeneous
//!   least-squares fitting of its linear representative, and the combined
//!   norm classifier.
//!
//! All core math is generic over the scalar type via [`scalar::Real`]
//! (`f32` or `f64`); concrete `f64` aliases are exported at the crate root.

pub mod bisector;
pub mod gauss;
pub mod io;
pub mod norms;
pub mod resolve;
pub mod scalar;

mod planar;
mod rng;

pub use scalar::Real;

/// Default absolute tolerance on unit-scale quantities.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default RNG seed used when no seed is supplied (runs are reproducible by
/// default).
pub const DEFAULT_SEED: u64 = 17;

/// Dynamically sized coordinate vector.
pub type Vector<S> = nalgebra::DVector<S>;

/// `f64` aliases for the main domain types.
pub type Vector64 = Vector<f64>;
pub type NormSpec64 = norms::NormSpec<f64>;
pub type Bisector64<'n> = bisector::Bisector<'n, f64>;

pub type AnchorSet64 = resolve::AnchorSet<f64>;
pub type CounterexampleCertificate64 = resolve::CounterexampleCertificate<f64>;
pub type GaussFit64 = gauss::GaussFit<f64>;

/// Convenience constructor for a [`Vector`] from a slice.
pub fn vector<S: Real>(coords: &[S]) -> Vector<S> {
    Vector::from_row_slice(coords)
}
