//! Minkowski functional of a vertex-represented symmetric polytope.
//!
//! The gauge `min { t > 0 : x/t ∈ conv(V) }` is the optimum of the linear
//! program `min Σ μ_i  s.t.  Σ μ_i v_i = x, μ ≥ 0`, solved here by a dense
//! two-phase simplex with Bland's rule. Problems are tiny (d ≤ ~6 rows, one
//! column per vertex), so a tableau method is entirely adequate.

use nalgebra::{DMatrix, DVector, Vector2};

use crate::norms::NormError;
use crate::scalar::Real;

const PIVOT_EPS: f64 = 1e-10;
const FEAS_EPS: f64 = 1e-7;

/// Gauge of `conv(vertices)` at `x`. Vertices must span and be centrally
/// symmetric (validated at construction), which makes the LP feasible and
/// bounded for every `x`.
pub(crate) fn polytope_gauge<S: Real>(vertices: &[DVector<S>], x: &DVector<S>) -> Result<S, NormError> {
    let scale = inf_norm(x);
    if scale == S::zero() {
        return Ok(S::zero());
    }
    let d = x.len();
    let n = vertices.len();
    let a = DMatrix::from_fn(d, n, |i, j| vertices[j][i]);
    let b = DVector::from_fn(d, |i, _| x[i] / scale);
    let value = simplex_min_sum(a, b)?;
    Ok(value * scale)
}

fn inf_norm<S: Real>(v: &DVector<S>) -> S {
    v.iter().fold(S::zero(), |m, &c| m.max(c.abs()))
}

/// Minimize `1ᵀμ` subject to `Aμ = b`, `μ ≥ 0`.
fn simplex_min_sum<S: Real>(a: DMatrix<S>, b: DVector<S>) -> Result<S, NormError> {
    let (m, n) = (a.nrows(), a.ncols());
    let rhs_col = n + m;
    // Tableau [A | I | b] with rows flipped so the right-hand side is nonnegative.
    let mut t = DMatrix::zeros(m, n + m + 1);
    for i in 0..m {
        let flip = b[i] < S::zero();
        for j in 0..n {
            t[(i, j)] = if flip { -a[(i, j)] } else { a[(i, j)] };
        }
        t[(i, n + i)] = S::one();
        t[(i, rhs_col)] = b[i].abs();
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Phase 1: drive the artificial variables to zero.
    let phase1_cost = |j: usize| if j >= n { S::one() } else { S::zero() };
    run_simplex(&mut t, &mut basis, &phase1_cost, n + m)?;
    let infeasibility = objective(&t, &basis, &phase1_cost);
    if infeasibility > S::of(FEAS_EPS) {
        return Err(NormError::GaugeFailure);
    }
    // Pivot remaining basic artificials out where a usable column exists;
    // rows without one are redundant constraints and stay basic at zero.
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| t[(i, j)].abs() > S::of(PIVOT_EPS)) {
                pivot(&mut t, &mut basis, i, j);
            }
        }
    }

    // Phase 2: minimize the sum of the original variables. Artificials are
    // barred from entering; any still basic sit at value zero.
    let phase2_cost = |j: usize| if j < n { S::one() } else { S::zero() };
    run_simplex(&mut t, &mut basis, &phase2_cost, n)?;
    Ok(objective(&t, &basis, &phase2_cost))
}

fn objective<S: Real>(t: &DMatrix<S>, basis: &[usize], cost: &impl Fn(usize) -> S) -> S {
    let rhs_col = t.ncols() - 1;
    basis
        .iter()
        .enumerate()
        .fold(S::zero(), |acc, (i, &j)| acc + cost(j) * t[(i, rhs_col)])
}

/// Simplex iterations with Bland's anti-cycling rule. Columns `>= max_col`
/// may not enter the basis.
fn run_simplex<S: Real>(
    t: &mut DMatrix<S>,
    basis: &mut [usize],
    cost: &impl Fn(usize) -> S,
    max_col: usize,
) -> Result<(), NormError> {
    let m = t.nrows();
    let rhs_col = t.ncols() - 1;
    let eps = S::of(PIVOT_EPS);
    let max_iter = 200 + 50 * t.ncols();
    for _ in 0..max_iter {
        // Reduced costs, recomputed from scratch each round for robustness.
        let mut entering = None;
        for j in 0..max_col {
            if basis.contains(&j) {
                continue;
            }
            let mut r = cost(j);
            for i in 0..m {
                r -= cost(basis[i]) * t[(i, j)];
            }
            if r < -eps {
                entering = Some(j);
                break; // Bland: smallest eligible index
            }
        }
        let Some(e) = entering else {
            return Ok(());
        };
        // Ratio test; ties broken by smallest basis index (Bland).
        let mut leave: Option<(usize, S)> = None;
        for i in 0..m {
            if t[(i, e)] > eps {
                let ratio = t[(i, rhs_col)] / t[(i, e)];
                match leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - eps || (ratio < lr + eps && basis[i] < basis[li]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((l, _)) = leave else {
            return Err(NormError::GaugeFailure); // unbounded: impossible for a gauge LP
        };
        pivot(t, basis, l, e);
    }
    Err(NormError::GaugeFailure)
}

fn pivot<S: Real>(t: &mut DMatrix<S>, basis: &mut [usize], row: usize, col: usize) {
    let m = t.nrows();
    let w = t.ncols();
    let p = t[(row, col)];
    for j in 0..w {
        t[(row, j)] /= p;
    }
    for i in 0..m {
        if i != row {
            let f = t[(i, col)];
            if f != S::zero() {
                for j in 0..w {
                    let delta = f * t[(row, j)];
                    t[(i, j)] -= delta;
                }
            }
        }
    }
    basis[row] = col;
}

/// Convex hull of a 2D point set in counterclockwise order (Andrew's
/// monotone chain). Near-duplicate points are merged first.
pub(crate) fn hull2d<S: Real>(points: &[Vector2<S>]) -> Vec<Vector2<S>> {
    let scale = points
        .iter()
        .fold(S::one(), |m, p| m.max(p.x.abs()).max(p.y.abs()));
    let merge_tol = S::of(1e-12) * scale;
    let mut pts: Vec<Vector2<S>> = Vec::new();
    for p in points {
        if !pts.iter().any(|q| (p - q).norm() <= merge_tol) {
            pts.push(*p);
        }
    }
    pts.sort_by(|a, b| {
        a.x.partial_cmp(&b.x)
            .unwrap()
            .then(a.y.partial_cmp(&b.y).unwrap())
    });
    if pts.len() <= 2 {
        return pts;
    }
    let turn_tol = S::of(1e-12) * scale * scale;
    let cross = |o: &Vector2<S>, a: &Vector2<S>, b: &Vector2<S>| {
        (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
    };
    let mut hull: Vec<Vector2<S>> = Vec::with_capacity(pts.len() * 2);
    for p in pts.iter().chain(pts.iter().rev().skip(1)) {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= turn_tol {
            hull.pop();
        }
        hull.push(*p);
    }
    hull.pop();
    hull
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dvector;

    fn square() -> Vec<DVector<f64>> {
        vec![
            dvector![1.0, 1.0],
            dvector![-1.0, 1.0],
            dvector![-1.0, -1.0],
            dvector![1.0, -1.0],
        ]
    }

    #[test]
    fn square_gauge_matches_linf() {
        let v = square();
        for (x, expected) in [
            (dvector![1.0, 1.0], 1.0f64),
            (dvector![2.0, 0.0], 2.0),
            (dvector![0.5, -0.25], 0.5),
            (dvector![-3.0, 3.0], 3.0),
        ] {
            let g = polytope_gauge(&v, &x).unwrap();
            assert!((g - expected).abs() < 1e-10, "gauge({x}) = {g}, want {expected}");
        }
    }

    #[test]
    fn octahedron_gauge_matches_l1() {
        let mut v = Vec::new();
        for i in 0..3 {
            let mut e = DVector::zeros(3);
            e[i] = 1.0;
            v.push(e.clone());
            v.push(-e);
        }
        for (x, expected) in [
            (dvector![1.0, 1.0, 1.0], 3.0f64),
            (dvector![0.5, -0.5, 0.0], 1.0),
            (dvector![-2.0, 1.0, 0.5], 3.5),
        ] {
            let g = polytope_gauge(&v, &x).unwrap();
            assert!((g - expected).abs() < 1e-10, "gauge({x}) = {g}, want {expected}");
        }
    }

    #[test]
    fn hexagon_gauge_values() {
        let v = vec![
            dvector![1.0, 0.0],
            dvector![0.5, 1.0],
            dvector![-0.5, 1.0],
            dvector![-1.0, 0.0],
            dvector![-0.5, -1.0],
            dvector![0.5, -1.0],
        ];
        let cases = [
            (dvector![1.0, 0.0], 1.0f64),
            (dvector![0.0, 1.0], 1.0),
            (dvector![1.0, 1.0], 1.5),
            (dvector![0.0, 0.0], 0.0),
        ];
        for (x, expected) in cases {
            let g = polytope_gauge(&v, &x).unwrap();
            assert!((g - expected).abs() < 1e-10, "gauge({x}) = {g}, want {expected}");
        }
    }

    #[test]
    fn redundant_interior_vertex_is_harmless() {
        let mut v = square();
        v.push(dvector![0.2, 0.1]);
        v.push(dvector![-0.2, -0.1]);
        let g = polytope_gauge(&v, &dvector![2.0, -2.0]).unwrap();
        assert!((g - 2.0).abs() < 1e-10);
    }

    #[test]
    fn hull_of_square_with_interior_points() {
        let pts = vec![
            Vector2::new(1.0, 1.0),
            Vector2::new(-1.0, 1.0),
            Vector2::new(-1.0, -1.0),
            Vector2::new(1.0, -1.0),
            Vector2::new(0.0, 0.0),
            Vector2::new(0.3, 0.2),
        ];
        let hull = hull2d(&pts);
        assert_eq!(hull.len(), 4);
    }
}
