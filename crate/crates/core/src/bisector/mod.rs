//! Geometry of the bisector `B(x, y) = { z : ‖z−x‖ = ‖z−y‖ }`.
//!
//! The central primitive is [`Bisector::line_intersect`]: along any line
//! parallel to the segment, the distance difference `h(t) = ‖x−z(t)‖ −
//! ‖y−z(t)‖` is nondecreasing with limits `∓‖x−y‖`, so a sign bracket always
//! exists and bisection finds the root set, which is a point or an interval.
//! Everything else — region bounds, flat-ray cones, slab fitting, the
//! reflection-isometry test — is built on top of that and the unit-ball
//! probes from [`crate::norms`].

use nalgebra::{Matrix2, Vector2};
use rayon::prelude::*;
use thiserror::Error;

use crate::norms::{FlatSegment, NormError, NormSpec};
use crate::planar::{self, Plane};
use crate::rng;
use crate::scalar::Real;
use crate::Vector;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BisectorError {
    #[error("bisector endpoints must be distinct")]
    CoincidentPoints,
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error("need at least dim+1 samples per radius, got {0}")]
    TooFewSamples(usize),
    #[error("radii must be positive and strictly increasing")]
    BadRadii,
    #[error("segment is not parallel to the bisector axis with positive ratio")]
    SegmentNotAligned,
    #[error("root bracketing failed to expand; inputs are out of numerical range")]
    BracketFailure,
}

/// The bisector of two distinct points under a norm.
#[derive(Clone, Debug)]
pub struct Bisector<'n, S: Real> {
    pub norm: &'n NormSpec<S>,
    pub x: Vector<S>,
    pub y: Vector<S>,
}

/// Membership verdict with the raw equidistance residual.
#[derive(Clone, Copy, Debug)]
pub struct Membership<S: Real> {
    pub is_member: bool,
    pub residual: S,
}

/// An affine line `{ base + t·dir }`.
#[derive(Clone, Debug)]
pub struct AffineLine<S: Real> {
    pub base: Vector<S>,
    pub dir: Vector<S>,
}

/// The open region of parallel lines that contains the bisector when no
/// unit-sphere segment is parallel to the axis.
#[derive(Clone, Debug)]
pub struct RegionBounds<S: Real> {
    /// Contact direction: supporting lines at `±p` are parallel to the axis.
    pub p: Vector<S>,
    pub line_through_x: AffineLine<S>,
    pub line_through_y: AffineLine<S>,
}

/// Two-parameter family `apex + s·gen_a + t·gen_b` (`s, t ≥ 0`) contained in
/// the bisector when the unit sphere has a flat segment parallel to the axis.
#[derive(Clone, Debug)]
pub struct FlatRayCone<S: Real> {
    pub apex: Vector<S>,
    pub gen_a: Vector<S>,
    pub gen_b: Vector<S>,
}

impl<S: Real> FlatRayCone<S> {
    pub fn point_at(&self, s: S, t: S) -> Vector<S> {
        &self.apex + &self.gen_a * s + &self.gen_b * t
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlabVerdict {
    Sandwiched,
    NotSandwiched,
}

/// Thinnest-slab fit over sampled bisector points.
#[derive(Clone, Debug)]
pub struct SlabFit<S: Real> {
    pub normal: Vector<S>,
    pub lo: S,
    pub hi: S,
    pub max_violation: S,
    pub sample_radius: S,
    /// Cumulative slab width (in the fitted normal direction) using all
    /// samples up to each radius.
    pub widths_by_radius: Vec<(S, S)>,
    pub verdict: SlabVerdict,
}

/// A sampled bisector point, tagged with the anchor-sphere radius it came
/// from and its equidistance residual.
#[derive(Clone, Debug)]
pub struct CloudPoint<S: Real> {
    pub radius: S,
    pub point: Vector<S>,
    pub residual: S,
}

/// Verdict thresholds for [`Bisector::slab_fit`]. The dichotomy itself is
/// qualitative; these make it observable at desk scale.
#[derive(Clone, Copy, Debug)]
pub struct SlabOptions {
    /// Width growth `w(r_max)/w(r_min)` beyond which the bisector is
    /// declared not sandwiched.
    pub growth_factor: f64,
    /// Absolute width under which the fit counts as flat.
    pub flatness_tol: f64,
}

impl Default for SlabOptions {
    fn default() -> Self {
        SlabOptions { growth_factor: 4.0, flatness_tol: 1e-8 }
    }
}

/// Outcome of the line-bisector reflection test.
#[derive(Clone, Debug)]
pub struct ReflectionReport<S: Real> {
    pub bisector_is_line: bool,
    pub line_direction: Option<Vector<S>>,
    /// Max of `|‖φ(v)‖ − 1|` over sampled unit vectors, when the reflection
    /// map is defined.
    pub isometry_residual: Option<S>,
}

impl<'n, S: Real> Bisector<'n, S> {
    pub fn new(norm: &'n NormSpec<S>, x: Vector<S>, y: Vector<S>) -> Result<Self, BisectorError> {
        norm.eval(&x)?;
        norm.eval(&y)?;
        if norm.eval_raw(&(&x - &y)) <= S::zero() {
            return Err(BisectorError::CoincidentPoints);
        }
        Ok(Bisector { norm, x, y })
    }

    fn axis(&self) -> Vector<S> {
        &self.y - &self.x
    }

    /// Equidistance test: `|‖z−x‖ − ‖z−y‖| ≤ tol·max(1, ‖z−x‖)`.
    pub fn membership(&self, z: &Vector<S>, tol: S) -> Result<Membership<S>, BisectorError> {
        let dx = self.norm.eval(&(z - &self.x))?;
        let dy = self.norm.eval(&(z - &self.y))?;
        let residual = (dx - dy).abs();
        Ok(Membership { is_member: residual <= tol * dx.max(S::one()), residual })
    }

    /// Intersection of the bisector with the line through `anchor` parallel
    /// to the axis. Returns one point when the leftmost and rightmost roots
    /// agree within `tol`, otherwise the two extreme roots of the flat
    /// interval.
    pub fn line_intersect(&self, anchor: &Vector<S>, tol: S) -> Result<Vec<Vector<S>>, BisectorError> {
        self.norm.eval(anchor)?;
        let v = self.axis();
        let point = |t: S| anchor + &v * t;
        let h = |t: S| {
            let z = point(t);
            self.norm.eval_raw(&(&self.x - &z)) - self.norm.eval_raw(&(&self.y - &z))
        };
        // Euclidean foot of x on the line, as a starting guess.
        let t0 = (&self.x - anchor).dot(&v) / v.dot(&v);
        let scale = self.norm.eval_raw(&(&self.x - &point(t0))).max(S::one());
        let band = S::of(1e-12) * scale;

        // h is nondecreasing with limits ∓‖x−y‖, so expanding the bracket
        // always reaches strict signs.
        let threshold = band * S::of(4.0);
        let mut lo = t0 - S::of(0.5);
        let mut hi = t0 + S::of(1.5);
        let mut step = S::one();
        let mut guard = 0;
        while h(lo) > -threshold {
            lo -= step;
            step *= S::of(2.0);
            guard += 1;
            if guard > 200 {
                return Err(BisectorError::BracketFailure);
            }
        }
        step = S::one();
        guard = 0;
        while h(hi) < threshold {
            hi += step;
            step *= S::of(2.0);
            guard += 1;
            if guard > 200 {
                return Err(BisectorError::BracketFailure);
            }
        }

        // Leftmost root: where h(t) ≥ −band switches on. Rightmost: where
        // h(t) ≤ band switches off.
        let mut a = lo;
        let mut b = hi;
        for _ in 0..100 {
            let mid = (a + b) / S::of(2.0);
            if h(mid) >= -band {
                b = mid;
            } else {
                a = mid;
            }
        }
        let t_left = b;
        let mut a = lo;
        let mut b = hi;
        for _ in 0..100 {
            let mid = (a + b) / S::of(2.0);
            if h(mid) <= band {
                a = mid;
            } else {
                b = mid;
            }
        }
        let t_right = a;

        let vlen = v.norm();
        if (t_right - t_left).abs() * vlen <= tol.max(band * S::of(16.0)) {
            Ok(vec![point((t_left + t_right) / S::of(2.0))])
        } else {
            Ok(vec![point(t_left), point(t_right)])
        }
    }

    /// Bounding parallel lines of the bisector (planar case). Returns `None`
    /// when a unit-sphere segment is parallel to the axis, in which case no
    /// such region exists. In dimension > 2 a plane through `x` and `y` must
    /// be supplied as a spanning pair of its direction space.
    pub fn region_bounds(
        &self,
        plane: Option<(&Vector<S>, &Vector<S>)>,
    ) -> Result<Option<RegionBounds<S>>, BisectorError> {
        let dir = self.axis();
        let plane = match plane {
            Some((u, w)) => {
                let p = Plane::from_spanning(u, w)?;
                if !p.contains(&dir) {
                    return Err(BisectorError::Norm(NormError::DirectionOutsidePlane));
                }
                p
            }
            None if self.norm.dim() == 2 => Plane::standard2d(),
            None => return Err(BisectorError::Norm(NormError::PlaneRequired(self.norm.dim()))),
        };
        let d2 = plane.coords(&dir);
        if !self.norm.is_strictly_convex()
            && planar::flat_segment_in_plane(self.norm, &plane, &d2).is_some()
        {
            return Ok(None);
        }
        let mut g = Vector2::new(-d2.y, d2.x);
        let tol = S::of(1e-12) * g.norm();
        if g.x < -tol || (g.x.abs() <= tol && g.y < S::zero()) {
            g = -g;
        }
        let face = planar::support_face(self.norm, &plane, &g);
        let p = plane.embed(&face.lo);
        Ok(Some(RegionBounds {
            line_through_x: AffineLine { base: self.x.clone(), dir: p.clone() },
            line_through_y: AffineLine { base: self.y.clone(), dir: p.clone() },
            p,
        }))
    }

    /// The cone `{ x + (1/λ)b + s·a + t·b : s, t ≥ 0 }` spanned by a flat
    /// segment with `a − b = λ(x − y)`; it lies inside the bisector.
    pub fn flat_ray_cone(&self, seg: &FlatSegment<S>) -> Result<FlatRayCone<S>, BisectorError> {
        let chord = &seg.a - &seg.b;
        let axis = &self.x - &self.y;
        let lambda = chord.dot(&axis) / axis.dot(&axis);
        if lambda <= S::zero()
            || (&chord - &axis * lambda).norm() > S::of(1e-9) * chord.norm().max(S::one())
        {
            return Err(BisectorError::SegmentNotAligned);
        }
        Ok(FlatRayCone {
            apex: &self.x + &seg.b / lambda,
            gen_a: seg.a.clone(),
            gen_b: seg.b.clone(),
        })
    }

    /// Sample the bisector from anchor spheres of the given radii, fit the
    /// thinnest slab, and judge whether the bisector stays between two
    /// parallel hyperplanes.
    pub fn slab_fit(
        &self,
        radii: &[S],
        samples_per_radius: usize,
        seed: u64,
        opts: &SlabOptions,
    ) -> Result<(SlabFit<S>, Vec<CloudPoint<S>>), BisectorError> {
        let dim = self.norm.dim();
        if samples_per_radius < dim + 1 {
            return Err(BisectorError::TooFewSamples(samples_per_radius));
        }
        if radii.is_empty() || radii[0] <= S::zero() || radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(BisectorError::BadRadii);
        }
        let mid = (&self.x + &self.y) / S::of(2.0);
        let tol = S::of(crate::DEFAULT_TOL);

        let jobs: Vec<(usize, u64)> = (0..radii.len())
            .flat_map(|k| {
                (0..samples_per_radius).map(move |j| (k, (k * samples_per_radius + j) as u64))
            })
            .collect();
        let cloud: Vec<CloudPoint<S>> = jobs
            .par_iter()
            .map(|&(k, stream)| {
                let mut rng = rng::substream(seed, stream);
                let dir = rng::random_direction::<S>(&mut rng, dim);
                let anchor = &mid + &dir * (radii[k] / dir.norm());
                let pts = self.line_intersect(&anchor, tol)?;
                Ok(pts
                    .into_iter()
                    .map(|point| {
                        let residual =
                            self.membership(&point, tol).expect("validated point").residual;
                        CloudPoint { radius: radii[k], point, residual }
                    })
                    .collect::<Vec<_>>())
            })
            .collect::<Result<Vec<_>, BisectorError>>()?
            .into_iter()
            .flatten()
            .collect();

        let normal = thinnest_slab_normal(&cloud, dim, seed);
        let widths_by_radius: Vec<(S, S)> = radii
            .iter()
            .map(|&r| {
                let mut lo = S::of(f64::INFINITY);
                let mut hi = S::of(f64::NEG_INFINITY);
                for c in cloud.iter().filter(|c| c.radius <= r) {
                    let t = normal.dot(&c.point);
                    lo = lo.min(t);
                    hi = hi.max(t);
                }
                (r, hi - lo)
            })
            .collect();

        // Slab interval from the innermost radius; violation measured on the
        // rest of the cloud.
        let (mut lo, mut hi) = (S::of(f64::INFINITY), S::of(f64::NEG_INFINITY));
        for c in cloud.iter().filter(|c| c.radius <= radii[0]) {
            let t = normal.dot(&c.point);
            lo = lo.min(t);
            hi = hi.max(t);
        }
        let mut max_violation = S::zero();
        for c in &cloud {
            let t = normal.dot(&c.point);
            max_violation = max_violation.max(lo - t).max(t - hi);
        }

        let flat = S::of(opts.flatness_tol);
        let w_first = widths_by_radius.first().map(|w| w.1).unwrap_or(S::zero());
        let w_last = widths_by_radius.last().map(|w| w.1).unwrap_or(S::zero());
        let growth = w_last / w_first.max(flat);
        let verdict = if w_last <= flat || growth <= S::of(opts.growth_factor) {
            SlabVerdict::Sandwiched
        } else {
            SlabVerdict::NotSandwiched
        };

        Ok((
            SlabFit {
                normal,
                lo,
                hi,
                max_violation,
                sample_radius: *radii.last().unwrap(),
                widths_by_radius,
                verdict,
            },
            cloud,
        ))
    }
}

/// Minimize slab width over a direction grid (uniform angles in 2D, a
/// Fibonacci lattice in 3D, seeded random directions beyond), then refine by
/// coordinate-wise perturbation with shrinking steps.
fn thinnest_slab_normal<S: Real>(cloud: &[CloudPoint<S>], dim: usize, seed: u64) -> Vector<S> {
    let width = |n: &Vector<S>| {
        let mut lo = S::of(f64::INFINITY);
        let mut hi = S::of(f64::NEG_INFINITY);
        for c in cloud {
            let t = n.dot(&c.point);
            lo = lo.min(t);
            hi = hi.max(t);
        }
        hi - lo
    };
    let grid = 2000usize;
    let mut candidates: Vec<Vector<S>> = Vec::with_capacity(grid);
    match dim {
        2 => {
            for i in 0..grid {
                let theta = S::pi() * S::of(i as f64) / S::of(grid as f64);
                candidates.push(Vector::from_row_slice(&[theta.cos(), theta.sin()]));
            }
        }
        3 => {
            let golden = S::pi() * (S::of(3.0) - S::of(5.0).sqrt());
            for i in 0..grid {
                let z = S::one() - (S::of(2.0) * S::of(i as f64) + S::one()) / S::of(grid as f64);
                let r = (S::one() - z * z).max(S::zero()).sqrt();
                let theta = golden * S::of(i as f64);
                candidates.push(Vector::from_row_slice(&[r * theta.cos(), r * theta.sin(), z]));
            }
        }
        _ => {
            let mut rng = rng::substream(seed, 0xA11CE);
            for _ in 0..grid {
                let v = rng::random_direction::<S>(&mut rng, dim);
                candidates.push(&v / v.norm());
            }
        }
    }
    let mut best = candidates
        .into_iter()
        .min_by(|a, b| width(a).partial_cmp(&width(b)).unwrap())
        .expect("non-empty grid");
    let mut best_w = width(&best);
    let mut step = S::of(0.1);
    while step > S::of(1e-6) {
        let mut improved = false;
        for i in 0..dim {
            for sgn in [S::one(), -S::one()] {
                let mut cand = best.clone();
                cand[i] += sgn * step;
                let n = cand.norm();
                if n <= S::zero() {
                    continue;
                }
                cand /= n;
                let w = width(&cand);
                if w < best_w {
                    best = cand;
                    best_w = w;
                    improved = true;
                }
            }
        }
        if !improved {
            step /= S::of(2.0);
        }
    }
    best
}

/// Test whether `B(−z, z)` is a line through the origin and, if so, whether
/// the linear map fixing the line and sending `z ↦ −z` preserves the norm.
pub fn reflection_isometry_check<S: Real>(
    norm: &NormSpec<S>,
    z: &Vector<S>,
    samples: usize,
    seed: u64,
) -> Result<ReflectionReport<S>, BisectorError> {
    if norm.dim() != 2 {
        return Err(BisectorError::Norm(NormError::PlaneRequired(norm.dim())));
    }
    if z.norm() <= S::zero() {
        return Err(BisectorError::Norm(NormError::ZeroDirection));
    }
    let bis = Bisector::new(norm, -z.clone(), z.clone())?;
    let tol = S::of(crate::DEFAULT_TOL);
    let mut rng = rng::chacha(seed);
    let zscale = z.norm();
    let mut points: Vec<Vector<S>> = Vec::new();
    for i in 0..samples.max(8) {
        let r = zscale * S::of(2.0).powi((i % 4) as i32);
        let dir = rng::random_direction::<S>(&mut rng, 2);
        let anchor = &dir * (r / dir.norm());
        points.extend(bis.line_intersect(&anchor, tol)?);
    }
    let far = points
        .iter()
        .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
        .expect("at least one sample")
        .clone();
    let p_hat = &far / far.norm();
    let collinear = points.iter().all(|w| {
        let cross = (p_hat[0] * w[1] - p_hat[1] * w[0]).abs();
        cross <= S::of(1e-7) * w.norm().max(S::one())
    });
    if !collinear {
        return Ok(ReflectionReport {
            bisector_is_line: false,
            line_direction: None,
            isometry_residual: None,
        });
    }
    // φ fixes the line direction and sends z to −z.
    let basis = Matrix2::new(p_hat[0], z[0], p_hat[1], z[1]);
    let image = Matrix2::new(p_hat[0], -z[0], p_hat[1], -z[1]);
    let phi =
        image * basis.try_inverse().ok_or(BisectorError::Norm(NormError::DegeneratePlane))?;
    let mut residual = S::zero();
    for _ in 0..samples.max(8) {
        let v = norm.sphere_point(&rng::random_direction(&mut rng, 2))?;
        let img = Vector::from_row_slice(&[
            phi[(0, 0)] * v[0] + phi[(0, 1)] * v[1],
            phi[(1, 0)] * v[0] + phi[(1, 1)] * v[1],
        ]);
        residual = residual.max((norm.eval_raw(&img) - S::one()).abs());
    }
    Ok(ReflectionReport {
        bisector_is_line: true,
        line_direction: Some(p_hat),
        isometry_residual: Some(residual),
    })
}

#[cfg(test)]
mod tests;
