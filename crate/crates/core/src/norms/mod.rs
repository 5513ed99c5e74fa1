//! Norm abstraction and unit-ball probes.
//!
//! A [`NormSpec`] is one of four closed kinds — Euclidean, ellipsoidal,
//! p-norm (including `p = ∞`) and vertex-represented symmetric polytopes —
//! so every operation can use a closed form where one exists. The probes
//! exposed here (support contacts, flat segments, parallelogram defect,
//! strict-convexity reports) are what the bisector and resolving machinery
//! consume.

pub(crate) mod gauge;

use nalgebra::{Cholesky, DMatrix};
use thiserror::Error;

use crate::planar::{self, Plane};
use crate::rng;
use crate::scalar::Real;
use crate::Vector;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NormError {
    #[error("dimension mismatch: norm lives in dimension {expected}, vector in {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("vector has non-finite coordinates")]
    NonFinite,
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("p-norm exponent must satisfy p >= 1")]
    InvalidExponent,
    #[error("ellipsoidal matrix must be square and symmetric")]
    AsymmetricMatrix,
    #[error("ellipsoidal matrix must be positive definite")]
    NotPositiveDefinite,
    #[error("polyhedral vertex set must be centrally symmetric")]
    NotCentrallySymmetric,
    #[error("polyhedral vertices must span the space")]
    DegenerateVertices,
    #[error("a containing 2D plane is required for this query in dimension {0}")]
    PlaneRequired(usize),
    #[error("plane basis is degenerate")]
    DegeneratePlane,
    #[error("direction does not lie in the supplied plane")]
    DirectionOutsidePlane,
    #[error("polytope gauge LP failed to converge")]
    GaugeFailure,
}

/// Exponent of a p-norm; infinity is a first-class value, not a limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PExponent<S> {
    Finite(S),
    Infinity,
}

/// A symmetric norm on `ℝ^d`, given analytically or as a symmetric polytope.
#[derive(Clone, Debug, PartialEq)]
pub enum NormSpec<S: Real> {
    Euclidean { dim: usize },
    Ellipsoidal { q: DMatrix<S> },
    PNorm { dim: usize, p: PExponent<S> },
    Polyhedral { dim: usize, vertices: Vec<Vector<S>> },
}

impl<S: Real> NormSpec<S> {
    pub fn euclidean(dim: usize) -> Result<Self, NormError> {
        if dim < 2 {
            return Err(NormError::DimensionTooSmall(dim));
        }
        Ok(NormSpec::Euclidean { dim })
    }

    /// Norm `v ↦ sqrt(vᵀ Q v)` for a symmetric positive-definite `Q`.
    pub fn ellipsoidal(q: DMatrix<S>) -> Result<Self, NormError> {
        let dim = q.nrows();
        if dim < 2 {
            return Err(NormError::DimensionTooSmall(dim));
        }
        if q.ncols() != dim {
            return Err(NormError::AsymmetricMatrix);
        }
        let scale = q.iter().fold(S::zero(), |m, &c| m.max(c.abs()));
        for i in 0..dim {
            for j in 0..i {
                if (q[(i, j)] - q[(j, i)]).abs() > S::of(1e-12) * scale {
                    return Err(NormError::AsymmetricMatrix);
                }
            }
        }
        if Cholesky::new(q.clone()).is_none() {
            return Err(NormError::NotPositiveDefinite);
        }
        Ok(NormSpec::Ellipsoidal { q })
    }

    pub fn p_norm(dim: usize, p: PExponent<S>) -> Result<Self, NormError> {
        if dim < 2 {
            return Err(NormError::DimensionTooSmall(dim));
        }
        if let PExponent::Finite(p) = p {
            if !(p.is_finite_real() && p >= S::one()) {
                return Err(NormError::InvalidExponent);
            }
        }
        Ok(NormSpec::PNorm { dim, p })
    }

    /// Gauge of the convex hull of a centrally symmetric, spanning vertex
    /// set.
    pub fn polyhedral(dim: usize, vertices: Vec<Vector<S>>) -> Result<Self, NormError> {
        if dim < 2 {
            return Err(NormError::DimensionTooSmall(dim));
        }
        if vertices.len() < 2 * dim {
            return Err(NormError::DegenerateVertices);
        }
        let mut scale = S::zero();
        for v in &vertices {
            if v.len() != dim {
                return Err(NormError::DimensionMismatch { expected: dim, got: v.len() });
            }
            if v.iter().any(|c| !c.is_finite_real()) {
                return Err(NormError::NonFinite);
            }
            scale = scale.max(v.norm());
        }
        if scale == S::zero() {
            return Err(NormError::DegenerateVertices);
        }
        let tol = S::of(1e-9) * scale;
        for v in &vertices {
            if !vertices.iter().any(|w| (w + v).norm() <= tol) {
                return Err(NormError::NotCentrallySymmetric);
            }
        }
        let m = DMatrix::from_fn(dim, vertices.len(), |i, j| vertices[j][i]);
        let svals = m.svd(false, false).singular_values;
        let smin = svals.iter().fold(S::of(f64::INFINITY), |m, &s| m.min(s));
        if smin <= S::of(1e-10) * scale {
            return Err(NormError::DegenerateVertices);
        }
        Ok(NormSpec::Polyhedral { dim, vertices })
    }

    pub fn dim(&self) -> usize {
        match self {
            NormSpec::Euclidean { dim } => *dim,
            NormSpec::Ellipsoidal { q } => q.nrows(),
            NormSpec::PNorm { dim, .. } => *dim,
            NormSpec::Polyhedral { dim, .. } => *dim,
        }
    }

    /// Exact strict convexity of the unit ball (closed kinds admit an
    /// analytic answer).
    pub fn is_strictly_convex(&self) -> bool {
        match self {
            NormSpec::Euclidean { .. } | NormSpec::Ellipsoidal { .. } => true,
            NormSpec::PNorm { p: PExponent::Finite(p), .. } => *p > S::one(),
            NormSpec::PNorm { p: PExponent::Infinity, .. } => false,
            NormSpec::Polyhedral { .. } => false,
        }
    }

    fn check(&self, v: &Vector<S>) -> Result<(), NormError> {
        if v.len() != self.dim() {
            return Err(NormError::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        if v.iter().any(|c| !c.is_finite_real()) {
            return Err(NormError::NonFinite);
        }
        Ok(())
    }

    /// Evaluate the norm.
    pub fn eval(&self, v: &Vector<S>) -> Result<S, NormError> {
        self.check(v)?;
        Ok(self.eval_raw(v))
    }

    /// Unchecked evaluation, for inner loops on validated data.
    pub(crate) fn eval_raw(&self, v: &Vector<S>) -> S {
        match self {
            NormSpec::Euclidean { .. } => v.norm(),
            NormSpec::Ellipsoidal { q } => v.dot(&(q * v)).sqrt(),
            NormSpec::PNorm { p: PExponent::Infinity, .. } => {
                v.iter().fold(S::zero(), |m, &c| m.max(c.abs()))
            }
            NormSpec::PNorm { p: PExponent::Finite(p), .. } => {
                let peak = v.iter().fold(S::zero(), |m, &c| m.max(c.abs()));
                if peak == S::zero() {
                    return S::zero();
                }
                if *p == S::one() {
                    return v.iter().fold(S::zero(), |acc, &c| acc + c.abs());
                }
                let sum = v
                    .iter()
                    .fold(S::zero(), |acc, &c| acc + (c.abs() / peak).powf(*p));
                peak * sum.powf(S::one() / *p)
            }
            NormSpec::Polyhedral { vertices, .. } => gauge::polytope_gauge(vertices, v)
                .expect("gauge LP converges for validated polytopes"),
        }
    }

    /// Radial projection onto the unit sphere.
    pub fn sphere_point(&self, direction: &Vector<S>) -> Result<Vector<S>, NormError> {
        self.check(direction)?;
        let n = self.eval_raw(direction);
        if n <= S::zero() {
            return Err(NormError::ZeroDirection);
        }
        Ok(direction / n)
    }

    /// Argmax of `⟨functional, u⟩` over the unit sphere, with a flag for
    /// non-unique (flat) contacts. Ties in polygonal kinds resolve to the
    /// lexicographically smallest vertex.
    pub fn support_contact(&self, functional: &Vector<S>) -> Result<SupportContact<S>, NormError> {
        self.check(functional)?;
        let fnorm = functional.norm();
        if fnorm <= S::zero() {
            return Err(NormError::ZeroDirection);
        }
        let f = functional / fnorm;
        let dim = self.dim();
        let tie_tol = S::of(1e-9);
        let (point, unique) = match self {
            NormSpec::Euclidean { .. } => (f.clone(), true),
            NormSpec::Ellipsoidal { q } => {
                let chol = Cholesky::new(q.clone()).expect("validated positive definite");
                let u = chol.solve(&f);
                let scale = f.dot(&u).sqrt();
                (u / scale, true)
            }
            NormSpec::PNorm { p: PExponent::Finite(p), .. } if *p > S::one() => {
                let expo = S::one() / (*p - S::one());
                let u = Vector::from_fn(dim, |i, _| {
                    let c: S = f[i];
                    c.signum() * c.abs().powf(expo)
                });
                let n = self.eval_raw(&u);
                (u / n, true)
            }
            NormSpec::PNorm { p: PExponent::Finite(_), .. } => {
                // p = 1: the maximizing vertices of the cross-polytope are
                // ±e_i for coordinates with maximal |f_i|.
                let peak = f.iter().fold(S::zero(), |m, &c| m.max(c.abs()));
                let tied: Vec<usize> = (0..dim).filter(|&i| f[i].abs() >= peak - tie_tol).collect();
                let mut best: Option<Vector<S>> = None;
                for &i in &tied {
                    let mut v = Vector::zeros(dim);
                    v[i] = if f[i] >= S::zero() { S::one() } else { -S::one() };
                    if best.as_ref().map_or(true, |b| lex_less(&v, b)) {
                        best = Some(v);
                    }
                }
                (best.unwrap(), tied.len() == 1)
            }
            NormSpec::PNorm { p: PExponent::Infinity, .. } => {
                let mut unique = true;
                let u = Vector::from_fn(dim, |i, _| {
                    let c: S = f[i];
                    if c > tie_tol {
                        S::one()
                    } else if c < -tie_tol {
                        -S::one()
                    } else {
                        unique = false;
                        -S::one() // lexicographically smallest corner of the tied face
                    }
                });
                (u, unique)
            }
            NormSpec::Polyhedral { vertices, .. } => {
                let h = vertices
                    .iter()
                    .map(|v| f.dot(v))
                    .fold(S::of(f64::NEG_INFINITY), |m, v| m.max(v));
                let scale = vertices.iter().fold(S::one(), |m, v| m.max(v.norm()));
                let tied: Vec<&Vector<S>> = vertices
                    .iter()
                    .filter(|v| f.dot(v) >= h - tie_tol * scale)
                    .collect();
                let best = tied
                    .iter()
                    .fold(None::<&Vector<S>>, |acc, v| match acc {
                        Some(b) if !lex_less(v, b) => Some(b),
                        _ => Some(v),
                    })
                    .unwrap()
                    .clone();
                (best, tied.len() == 1)
            }
        };
        Ok(SupportContact { direction: f, point, is_exposed_uniquely: unique })
    }

    /// Maximal unit-sphere segment parallel to `direction`, if one exists.
    /// In dimension > 2 the planar search needs a containing 2D subspace,
    /// supplied as a spanning pair.
    pub fn flat_segment_parallel_to(
        &self,
        direction: &Vector<S>,
        plane: Option<(&Vector<S>, &Vector<S>)>,
    ) -> Result<Option<FlatSegment<S>>, NormError> {
        self.check(direction)?;
        if direction.norm() <= S::zero() {
            return Err(NormError::ZeroDirection);
        }
        let plane = match plane {
            Some((u, v)) => {
                let p = Plane::from_spanning(u, v)?;
                if !p.contains(direction) {
                    return Err(NormError::DirectionOutsidePlane);
                }
                p
            }
            None if self.dim() == 2 => Plane::standard2d(),
            None => return Err(NormError::PlaneRequired(self.dim())),
        };
        if self.is_strictly_convex() {
            return Ok(None);
        }
        let d2 = plane.coords(direction);
        let Some((a2, b2)) = planar::flat_segment_in_plane(self, &plane, &d2) else {
            return Ok(None);
        };
        let a = plane.embed(&a2);
        let b = plane.embed(&b2);
        let lambda_ratio = (a2 - b2).norm() / d2.norm();
        Ok(Some(FlatSegment { a, b, lambda_ratio }))
    }

    /// `2(‖x‖² + ‖y‖²) − (‖x+y‖² + ‖x−y‖²)`; identically zero exactly for
    /// inner-product norms.
    pub fn parallelogram_defect(&self, x: &Vector<S>, y: &Vector<S>) -> Result<S, NormError> {
        self.check(x)?;
        self.check(y)?;
        let two = S::of(2.0);
        let nx = self.eval_raw(x);
        let ny = self.eval_raw(y);
        let np = self.eval_raw(&(x + y));
        let nm = self.eval_raw(&(x - y));
        Ok(two * (nx * nx + ny * ny) - (np * np + nm * nm))
    }

    /// Strict-convexity verdict with a flat-segment witness when the ball
    /// has one. The verdict is analytic for the closed kinds; the seeded
    /// sampling only cross-checks it with midpoint tests on random chords.
    pub fn strict_convexity_probe(&self, num_directions: usize, seed: u64) -> StrictConvexity<S> {
        let witness = if self.is_strictly_convex() { None } else { self.flat_witness() };
        let strictly_convex = witness.is_none();

        let mut rng = rng::chacha(seed);
        let mut max_mid = S::zero();
        for _ in 0..num_directions {
            let u = self
                .sphere_point(&rng::random_direction(&mut rng, self.dim()))
                .expect("nonzero direction");
            let v = self
                .sphere_point(&rng::random_direction(&mut rng, self.dim()))
                .expect("nonzero direction");
            if (&u - &v).norm() < S::of(1e-6) {
                continue;
            }
            let mid = self.eval_raw(&((u + v) / S::of(2.0)));
            max_mid = max_mid.max(mid);
        }
        if strictly_convex {
            debug_assert!(
                max_mid < S::one() + S::of(1e-9),
                "midpoint probe contradicts analytic strict convexity"
            );
        }
        StrictConvexity { strictly_convex, witness }
    }

    /// A canonical flat segment for the non-strictly-convex kinds.
    fn flat_witness(&self) -> Option<FlatSegment<S>> {
        let dim = self.dim();
        match self {
            NormSpec::PNorm { p: PExponent::Infinity, .. } => {
                let mut d = Vector::zeros(dim);
                d[0] = -S::one();
                let plane = coordinate_plane(dim);
                self.flat_segment_parallel_to(&d, plane_ref(&plane)).ok().flatten()
            }
            NormSpec::PNorm { p: PExponent::Finite(_), .. } => {
                let mut d = Vector::zeros(dim);
                d[0] = S::one();
                d[1] = -S::one();
                let plane = coordinate_plane(dim);
                self.flat_segment_parallel_to(&d, plane_ref(&plane)).ok().flatten()
            }
            NormSpec::Polyhedral { vertices, .. } => {
                // A polytope sphere always carries two input vertices whose
                // midpoint stays on the sphere; that pair spans a facet
                // segment.
                for (i, u) in vertices.iter().enumerate() {
                    for w in vertices.iter().skip(i + 1) {
                        let mid = (u + w) / S::of(2.0);
                        if mid.norm() < S::of(1e-9) {
                            continue; // antipodal pair
                        }
                        if (self.eval_raw(&mid) - S::one()).abs() <= S::of(1e-9)
                            && (self.eval_raw(u) - S::one()).abs() <= S::of(1e-9)
                        {
                            let d = u - w;
                            let plane = if dim == 2 { None } else { Some((u.clone(), w.clone())) };
                            if let Ok(Some(seg)) = self.flat_segment_parallel_to(&d, plane_ref(&plane))
                            {
                                return Some(seg);
                            }
                        }
                    }
                }
                None
            }
            _ => None,
        }
    }

    /// Restriction to the leading `k` coordinates, when it is representable
    /// in the same closed enumeration.
    pub(crate) fn coordinate_restriction(&self, k: usize) -> Option<NormSpec<S>> {
        if k < 2 || k > self.dim() {
            return None;
        }
        match self {
            NormSpec::Euclidean { .. } => Some(NormSpec::Euclidean { dim: k }),
            NormSpec::Ellipsoidal { q } => {
                let sub = DMatrix::from_fn(k, k, |i, j| q[(i, j)]);
                NormSpec::ellipsoidal(sub).ok()
            }
            NormSpec::PNorm { p, .. } => Some(NormSpec::PNorm { dim: k, p: *p }),
            NormSpec::Polyhedral { .. } => None,
        }
    }
}

fn coordinate_plane<S: Real>(dim: usize) -> Option<(Vector<S>, Vector<S>)> {
    if dim == 2 {
        return None;
    }
    let mut e1 = Vector::zeros(dim);
    e1[0] = S::one();
    let mut e2 = Vector::zeros(dim);
    e2[1] = S::one();
    Some((e1, e2))
}

fn plane_ref<S: Real>(plane: &Option<(Vector<S>, Vector<S>)>) -> Option<(&Vector<S>, &Vector<S>)> {
    plane.as_ref().map(|(u, v)| (u, v))
}

pub(crate) fn lex_less<S: Real>(a: &Vector<S>, b: &Vector<S>) -> bool {
    for i in 0..a.len().min(b.len()) {
        if a[i] < b[i] {
            return true;
        }
        if a[i] > b[i] {
            return false;
        }
    }
    false
}

/// A supporting contact of the unit ball: the functional direction, a point
/// of the sphere it exposes, and whether that point is unique.
#[derive(Clone, Debug)]
pub struct SupportContact<S: Real> {
    pub direction: Vector<S>,
    pub point: Vector<S>,
    pub is_exposed_uniquely: bool,
}

/// A nondegenerate segment on the unit sphere, oriented so that `a − b` is a
/// positive multiple of the direction it was requested for; `lambda_ratio`
/// is the factor in `a − b = λ · direction`.
#[derive(Clone, Debug)]
pub struct FlatSegment<S: Real> {
    pub a: Vector<S>,
    pub b: Vector<S>,
    pub lambda_ratio: S,
}

/// Strict-convexity verdict with an optional flat-segment witness.
#[derive(Clone, Debug)]
pub struct StrictConvexity<S: Real> {
    pub strictly_convex: bool,
    pub witness: Option<FlatSegment<S>>,
}

#[cfg(test)]
mod tests;
