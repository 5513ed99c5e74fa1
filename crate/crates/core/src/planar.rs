//! Planar sections of unit balls.
//!
//! Restricting a norm to a 2-dimensional subspace turns support queries and
//! flat-segment detection into problems on a planar convex body. The closed
//! kind enumeration keeps most of them exact: Euclidean and ellipsoidal
//! sections have closed-form support points, smooth p-norm sections are
//! maximized by a derivative-sign bisection, and polygonal balls in the
//! ambient plane use exact facet geometry. Only polygonal sections in
//! dimension three and up fall back to a radial plateau scan.

use nalgebra::{Matrix2, Vector2};

use crate::norms::{NormError, NormSpec, PExponent};
use crate::scalar::Real;
use crate::Vector;

/// A 2D subspace with a Euclidean-orthonormal basis.
#[derive(Clone, Debug)]
pub(crate) struct Plane<S: Real> {
    pub b1: Vector<S>,
    pub b2: Vector<S>,
}

impl<S: Real> Plane<S> {
    /// The coordinate plane of a 2-dimensional ambient space.
    pub fn standard2d() -> Self {
        Plane {
            b1: Vector::from_row_slice(&[S::one(), S::zero()]),
            b2: Vector::from_row_slice(&[S::zero(), S::one()]),
        }
    }

    /// Orthonormalize a spanning pair.
    pub fn from_spanning(u: &Vector<S>, v: &Vector<S>) -> Result<Self, NormError> {
        let nu = u.norm();
        if nu <= S::of(1e-300) {
            return Err(NormError::DegeneratePlane);
        }
        let b1 = u / nu;
        let w = v - &b1 * b1.dot(v);
        let nw = w.norm();
        if nw <= S::of(1e-10) * v.norm().max(S::one()) {
            return Err(NormError::DegeneratePlane);
        }
        Ok(Plane { b1, b2: w / nw })
    }

    pub fn embed(&self, w: &Vector2<S>) -> Vector<S> {
        &self.b1 * w.x + &self.b2 * w.y
    }

    /// Plane coordinates of an ambient vector (exact only for vectors in the
    /// plane).
    pub fn coords(&self, v: &Vector<S>) -> Vector2<S> {
        Vector2::new(self.b1.dot(v), self.b2.dot(v))
    }

    /// Whether an ambient vector lies in the plane (up to relative tolerance).
    pub fn contains(&self, v: &Vector<S>) -> bool {
        let p = self.embed(&self.coords(v));
        (v - p).norm() <= S::of(1e-9) * v.norm().max(S::one())
    }

    fn eval(&self, n: &NormSpec<S>, w: &Vector2<S>) -> S {
        n.eval_raw(&self.embed(w))
    }

    /// Radial parametrization of the planar unit sphere.
    fn sphere(&self, n: &NormSpec<S>, theta: S) -> Vector2<S> {
        let dir = Vector2::new(theta.cos(), theta.sin());
        dir / self.eval(n, &dir)
    }
}

/// Support set of the planar section in a functional direction: a single
/// exposed point (`lo == hi`) or a segment with the two endpoints.
#[derive(Clone, Debug)]
pub(crate) struct PlanarFace<S: Real> {
    pub lo: Vector2<S>,
    pub hi: Vector2<S>,
}

impl<S: Real> PlanarFace<S> {
    fn point(p: Vector2<S>) -> Self {
        PlanarFace { lo: p, hi: p }
    }

    pub fn is_point(&self) -> bool {
        (self.lo - self.hi).norm() <= S::of(1e-9)
    }
}

/// Argmax of `⟨g, ·⟩` over the planar section of the unit sphere.
pub(crate) fn support_face<S: Real>(n: &NormSpec<S>, plane: &Plane<S>, g: &Vector2<S>) -> PlanarFace<S> {
    match n {
        NormSpec::Euclidean { .. } => PlanarFace::point(g / g.norm()),
        NormSpec::Ellipsoidal { q } => {
            // Section Gram matrix: the restricted norm is w ↦ sqrt(wᵀ G w).
            let qb1 = q * &plane.b1;
            let qb2 = q * &plane.b2;
            let gram = Matrix2::new(
                plane.b1.dot(&qb1),
                plane.b1.dot(&qb2),
                plane.b2.dot(&qb1),
                plane.b2.dot(&qb2),
            );
            let w = gram.try_inverse().expect("section of a definite form is definite") * g;
            PlanarFace::point(w / g.dot(&w).sqrt())
        }
        NormSpec::PNorm { p: PExponent::Finite(p), .. } if *p > S::one() => {
            PlanarFace::point(smooth_support(n, plane, g))
        }
        _ => {
            if n.dim() == 2 {
                polygon_face(&polygon_vertices(n), g)
            } else {
                section_face_scan(n, plane, g)
            }
        }
    }
}

/// Maximize `⟨g, s(θ)⟩` for a smooth strictly convex section: coarse grid,
/// then bisection on the sign of the numerical derivative.
fn smooth_support<S: Real>(n: &NormSpec<S>, plane: &Plane<S>, g: &Vector2<S>) -> Vector2<S> {
    let m = |theta: S| g.dot(&plane.sphere(n, theta));
    let grid = 512usize;
    let two_pi = S::two_pi();
    let step = two_pi / S::of(grid as f64);
    let mut best = (S::zero(), m(S::zero()));
    for k in 1..grid {
        let theta = step * S::of(k as f64);
        let v = m(theta);
        if v > best.1 {
            best = (theta, v);
        }
    }
    let h = S::of(1e-6);
    let dm = |theta: S| (m(theta + h) - m(theta - h)) / (h + h);
    let mut lo = best.0 - step;
    let mut hi = best.0 + step;
    // The derivative crosses + → − at the maximizer; widen once if the grid
    // bracket misses it.
    for _ in 0..2 {
        if dm(lo) >= S::zero() && dm(hi) <= S::zero() {
            break;
        }
        lo -= step;
        hi += step;
    }
    for _ in 0..80 {
        let mid = (lo + hi) / S::of(2.0);
        if dm(mid) >= S::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    plane.sphere(n, (lo + hi) / S::of(2.0))
}

/// Counterclockwise vertex list of a polygonal unit ball in the ambient
/// plane (`dim == 2` kinds only).
fn polygon_vertices<S: Real>(n: &NormSpec<S>) -> Vec<Vector2<S>> {
    let one = S::one();
    match n {
        NormSpec::PNorm { p: PExponent::Infinity, .. } => vec![
            Vector2::new(one, one),
            Vector2::new(-one, one),
            Vector2::new(-one, -one),
            Vector2::new(one, -one),
        ],
        NormSpec::PNorm { p: PExponent::Finite(_), .. } => vec![
            Vector2::new(one, S::zero()),
            Vector2::new(S::zero(), one),
            Vector2::new(-one, S::zero()),
            Vector2::new(S::zero(), -one),
        ],
        NormSpec::Polyhedral { vertices, .. } => {
            let pts: Vec<Vector2<S>> = vertices.iter().map(|v| Vector2::new(v[0], v[1])).collect();
            crate::norms::gauge::hull2d(&pts)
        }
        _ => unreachable!("polygon_vertices is only called for polygonal kinds"),
    }
}

/// Exact support face of a polygon: maximizing vertex, or the extreme pair
/// when several vertices tie.
fn polygon_face<S: Real>(vertices: &[Vector2<S>], g: &Vector2<S>) -> PlanarFace<S> {
    let scale = vertices.iter().fold(S::one(), |m, v| m.max(v.norm()));
    let h = vertices
        .iter()
        .map(|v| g.dot(v))
        .fold(S::of(f64::NEG_INFINITY), |m, v| m.max(v));
    let tol = S::of(1e-9) * scale * g.norm();
    let tied: Vec<&Vector2<S>> = vertices.iter().filter(|v| g.dot(v) >= h - tol).collect();
    if tied.len() == 1 {
        return PlanarFace::point(*tied[0]);
    }
    let along = Vector2::new(-g.y, g.x);
    let lo = tied
        .iter()
        .min_by(|a, b| along.dot(a).partial_cmp(&along.dot(b)).unwrap())
        .unwrap();
    let hi = tied
        .iter()
        .max_by(|a, b| along.dot(a).partial_cmp(&along.dot(b)).unwrap())
        .unwrap();
    PlanarFace { lo: **lo, hi: **hi }
}

/// Support face of a polygonal section in dimension ≥ 3 by radial scan: find
/// the maximizing plateau of `⟨g, s(θ)⟩` and refine its boundary angles by
/// bisection. Facets shorter than the grid spacing are reported as points.
fn section_face_scan<S: Real>(n: &NormSpec<S>, plane: &Plane<S>, g: &Vector2<S>) -> PlanarFace<S> {
    let m = |theta: S| g.dot(&plane.sphere(n, theta));
    let grid = 2048usize;
    let two_pi = S::two_pi();
    let step = two_pi / S::of(grid as f64);
    let values: Vec<S> = (0..grid).map(|k| m(step * S::of(k as f64))).collect();
    let (k_best, &h) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap();
    let band = S::of(1e-10) * (S::one() + h.abs());
    let inside = |theta: S| m(theta) >= h - band;

    // Expand the plateau from the best grid sample, then pin each edge.
    let mut left = k_best as isize;
    while left > k_best as isize - grid as isize && inside(step * S::of((left - 1) as f64)) {
        left -= 1;
    }
    let mut right = k_best as isize;
    while right < k_best as isize + grid as isize && inside(step * S::of((right + 1) as f64)) {
        right += 1;
    }
    let refine = |mut out: S, mut ins: S| {
        for _ in 0..60 {
            let mid = (out + ins) / S::of(2.0);
            if inside(mid) {
                ins = mid;
            } else {
                out = mid;
            }
        }
        ins
    };
    let theta_lo = refine(step * S::of((left - 1) as f64), step * S::of(left as f64));
    let theta_hi = refine(step * S::of((right + 1) as f64), step * S::of(right as f64));
    if (theta_hi - theta_lo).abs() < S::of(1e-7) {
        PlanarFace::point(plane.sphere(n, step * S::of(k_best as f64)))
    } else {
        PlanarFace {
            lo: plane.sphere(n, theta_lo),
            hi: plane.sphere(n, theta_hi),
        }
    }
}

/// Maximal unit-sphere segment parallel to `direction2` (plane coordinates),
/// oriented so that `a − b` is a positive multiple of `direction2`.
pub(crate) fn flat_segment_in_plane<S: Real>(
    n: &NormSpec<S>,
    plane: &Plane<S>,
    direction2: &Vector2<S>,
) -> Option<(Vector2<S>, Vector2<S>)> {
    // Probe the face whose supporting line is parallel to the direction; the
    // functional is the quarter-turn of the direction, sign-normalized to be
    // lexicographically positive so repeated queries pick the same face.
    let mut g = Vector2::new(-direction2.y, direction2.x);
    let tol = S::of(1e-12) * g.norm();
    if g.x < -tol || (g.x.abs() <= tol && g.y < S::zero()) {
        g = -g;
    }
    let face = support_face(n, plane, &g);
    if face.is_point() {
        return None;
    }
    if (face.lo - face.hi).dot(direction2) > S::zero() {
        Some((face.lo, face.hi))
    } else {
        Some((face.hi, face.lo))
    }
}
