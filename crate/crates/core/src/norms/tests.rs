use nalgebra::{dvector, DMatrix};
use rand::Rng;

use super::*;

fn linf(dim: usize) -> NormSpec<f64> {
    NormSpec::p_norm(dim, PExponent::Infinity).unwrap()
}

fn lp(dim: usize, p: f64) -> NormSpec<f64> {
    NormSpec::p_norm(dim, PExponent::Finite(p)).unwrap()
}

fn euclid(dim: usize) -> NormSpec<f64> {
    NormSpec::euclidean(dim).unwrap()
}

pub(crate) fn hexagon() -> NormSpec<f64> {
    NormSpec::polyhedral(
        2,
        vec![
            dvector![1.0, 0.0],
            dvector![0.5, 1.0],
            dvector![-0.5, 1.0],
            dvector![-1.0, 0.0],
            dvector![-0.5, -1.0],
            dvector![0.5, -1.0],
        ],
    )
    .unwrap()
}

#[test]
fn eval_examples() {
    assert_eq!(linf(2).eval(&dvector![1.0, 1.0]).unwrap(), 1.0);
    assert_eq!(euclid(2).eval(&dvector![3.0, 4.0]).unwrap(), 5.0);
    let q = lp(2, 4.0).eval(&dvector![1.0, 1.0]).unwrap();
    assert!((q - 2.0_f64.powf(0.25)).abs() < 1e-15, "got {q}");
}

#[test]
fn eval_rejects_bad_input() {
    assert!(matches!(
        euclid(2).eval(&dvector![1.0, 2.0, 3.0]),
        Err(NormError::DimensionMismatch { .. })
    ));
    assert!(matches!(euclid(2).eval(&dvector![f64::NAN, 0.0]), Err(NormError::NonFinite)));
}

#[test]
fn sphere_point_examples() {
    let p = linf(2).sphere_point(&dvector![2.0, 0.0]).unwrap();
    assert_eq!(p, dvector![1.0, 0.0]);

    let p = euclid(2).sphere_point(&dvector![1.0, 1.0]).unwrap();
    let s = 2.0_f64.sqrt() / 2.0;
    assert!((p - dvector![s, s]).norm() < 1e-15);

    let p = lp(2, 4.0).sphere_point(&dvector![1.0, 1.0]).unwrap();
    let c = 2.0_f64.powf(-0.25);
    assert!((p - dvector![c, c]).norm() < 1e-15);

    assert!(matches!(
        euclid(2).sphere_point(&dvector![0.0, 0.0]),
        Err(NormError::ZeroDirection)
    ));
}

#[test]
fn support_contact_examples() {
    let c = euclid(2).support_contact(&dvector![1.0, 0.0]).unwrap();
    assert!((c.point.clone() - dvector![1.0, 0.0]).norm() < 1e-15);
    assert!(c.is_exposed_uniquely);

    // Lagrange condition u_i ∝ sign(v_i) |v_i|^(1/(p−1)) for p = 4.
    let c = lp(3, 4.0).support_contact(&dvector![1.0, 8.0, 0.0]).unwrap();
    let expected = lp(3, 4.0).sphere_point(&dvector![1.0, 2.0, 0.0]).unwrap();
    assert!((c.point.clone() - expected).norm() < 1e-12, "got {}", c.point);
    assert!(c.is_exposed_uniquely);

    // Flat contact of the square ball: a whole edge maximizes, the reported
    // vertex is the lexicographically smallest one.
    let c = linf(2).support_contact(&dvector![1.0, 0.0]).unwrap();
    assert_eq!(c.point, dvector![1.0, -1.0]);
    assert!(!c.is_exposed_uniquely);
}

#[test]
fn support_contact_dominates_random_sphere_points() {
    let mut rng = crate::rng::chacha(7);
    for norm in [euclid(3), lp(3, 4.0), lp(3, 1.5), linf(3), lp(3, 1.0)] {
        for _ in 0..50 {
            let f = crate::rng::random_direction::<f64>(&mut rng, 3);
            let c = norm.support_contact(&f).unwrap();
            for _ in 0..20 {
                let w = norm
                    .sphere_point(&crate::rng::random_direction::<f64>(&mut rng, 3))
                    .unwrap();
                assert!(
                    c.direction.dot(&c.point) >= c.direction.dot(&w) - 1e-9,
                    "support point not maximal for {norm:?}"
                );
            }
        }
    }
}

#[test]
fn flat_segment_square_matches_facet() {
    let seg = linf(2)
        .flat_segment_parallel_to(&dvector![-1.0, 0.0], None)
        .unwrap()
        .expect("square has a facet parallel to e1");
    assert!((seg.a.clone() - dvector![-1.0, 1.0]).norm() < 1e-12, "a = {}", seg.a);
    assert!((seg.b.clone() - dvector![1.0, 1.0]).norm() < 1e-12, "b = {}", seg.b);
    assert!((seg.lambda_ratio - 2.0).abs() < 1e-12);
}

#[test]
fn flat_segment_none_for_strictly_convex() {
    assert!(euclid(2)
        .flat_segment_parallel_to(&dvector![1.0, 0.0], None)
        .unwrap()
        .is_none());
    assert!(lp(2, 4.0)
        .flat_segment_parallel_to(&dvector![1.0, 1.0], None)
        .unwrap()
        .is_none());
}

#[test]
fn flat_segment_hexagon_top_facet() {
    let seg = hexagon()
        .flat_segment_parallel_to(&dvector![1.0, 0.0], None)
        .unwrap()
        .expect("hexagon top facet");
    assert!((seg.a.clone() - dvector![0.5, 1.0]).norm() < 1e-12, "a = {}", seg.a);
    assert!((seg.b.clone() - dvector![-0.5, 1.0]).norm() < 1e-12, "b = {}", seg.b);
    assert!((seg.lambda_ratio - 1.0).abs() < 1e-12);
}

#[test]
fn flat_segment_square_vertex_direction_is_none() {
    // No facet of the square is parallel to (1, 1).
    assert!(linf(2)
        .flat_segment_parallel_to(&dvector![1.0, 1.0], None)
        .unwrap()
        .is_none());
}

#[test]
fn flat_segment_in_higher_dimension_needs_plane() {
    let n = linf(3);
    assert!(matches!(
        n.flat_segment_parallel_to(&dvector![1.0, 0.0, 0.0], None),
        Err(NormError::PlaneRequired(3))
    ));
    let e1 = dvector![1.0, 0.0, 0.0];
    let e2 = dvector![0.0, 1.0, 0.0];
    let seg = n
        .flat_segment_parallel_to(&dvector![-1.0, 0.0, 0.0], Some((&e1, &e2)))
        .unwrap()
        .expect("cube facet");
    for v in [&seg.a, &seg.b, &((&seg.a + &seg.b) / 2.0)] {
        assert!((n.eval(v).unwrap() - 1.0).abs() < 1e-9);
    }
    assert!((seg.a.clone() - dvector![-1.0, 1.0, 0.0]).norm() < 1e-7, "a = {}", seg.a);
    assert!((seg.b.clone() - dvector![1.0, 1.0, 0.0]).norm() < 1e-7, "b = {}", seg.b);
}

#[test]
fn parallelogram_defect_examples() {
    let mut rng = crate::rng::chacha(3);
    let e3 = euclid(3);
    for _ in 0..100 {
        let x = crate::rng::gaussian_vector::<f64>(&mut rng, 3);
        let y = crate::rng::gaussian_vector::<f64>(&mut rng, 3);
        assert!(e3.parallelogram_defect(&x, &y).unwrap().abs() < 1e-12);
    }

    let d = lp(2, 1.0)
        .parallelogram_defect(&dvector![1.0, 0.0], &dvector![0.0, 1.0])
        .unwrap();
    assert!((d - (-4.0)).abs() < 1e-12, "got {d}");

    let d = lp(2, 4.0)
        .parallelogram_defect(&dvector![1.0, 0.0], &dvector![0.0, 1.0])
        .unwrap();
    assert!((d - (4.0 - 2.0 * 2.0_f64.sqrt())).abs() < 1e-12, "got {d}");
}

#[test]
fn strict_convexity_probe_examples() {
    assert!(lp(4, 3.0).strict_convexity_probe(200, 1).strictly_convex);

    let r = linf(2).strict_convexity_probe(200, 1);
    assert!(!r.strictly_convex);
    let w = r.witness.expect("facet witness");
    assert!((w.a.clone() - dvector![-1.0, 1.0]).norm() < 1e-12);
    assert!((w.b.clone() - dvector![1.0, 1.0]).norm() < 1e-12);

    let q = DMatrix::from_diagonal(&dvector![1.0, 2.0, 3.0]);
    let ell = NormSpec::ellipsoidal(q).unwrap();
    assert!(ell.strict_convexity_probe(200, 1).strictly_convex);

    let r = hexagon().strict_convexity_probe(200, 1);
    assert!(!r.strictly_convex);
    let w = r.witness.expect("hexagon facet witness");
    let n = hexagon();
    for v in [&w.a, &w.b, &((&w.a + &w.b) / 2.0)] {
        assert!((n.eval(v).unwrap() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn polyhedral_matches_closed_form_p_norms() {
    // The cube and cross-polytope gauges must agree with the l∞ / l1
    // formulas; this pins the LP solver against an independent oracle.
    let mut cube3 = Vec::new();
    for sx in [-1.0, 1.0] {
        for sy in [-1.0, 1.0] {
            for sz in [-1.0, 1.0] {
                cube3.push(dvector![sx, sy, sz]);
            }
        }
    }
    let cube = NormSpec::polyhedral(3, cube3).unwrap();
    let mut cross4 = Vec::new();
    for i in 0..4 {
        let mut e = Vector::zeros(4);
        e[i] = 1.0;
        cross4.push(e.clone());
        cross4.push(-e);
    }
    let cross = NormSpec::polyhedral(4, cross4).unwrap();

    let mut rng = crate::rng::chacha(11);
    for _ in 0..200 {
        let v3 = crate::rng::gaussian_vector::<f64>(&mut rng, 3) * rng.gen_range(0.1..10.0);
        let got = cube.eval(&v3).unwrap();
        let want = linf(3).eval(&v3).unwrap();
        assert!((got - want).abs() < 1e-9 * want.max(1.0), "cube {got} vs linf {want}");

        let v4 = crate::rng::gaussian_vector::<f64>(&mut rng, 4) * rng.gen_range(0.1..10.0);
        let got = cross.eval(&v4).unwrap();
        let want = lp(4, 1.0).eval(&v4).unwrap();
        assert!((got - want).abs() < 1e-9 * want.max(1.0), "cross {got} vs l1 {want}");
    }
}

#[test]
fn constructors_reject_invalid_specs() {
    assert!(matches!(NormSpec::<f64>::euclidean(1), Err(NormError::DimensionTooSmall(1))));
    assert!(matches!(
        NormSpec::p_norm(2, PExponent::Finite(0.5)),
        Err(NormError::InvalidExponent)
    ));
    let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, -0.5, 1.0]);
    assert!(matches!(NormSpec::ellipsoidal(asym), Err(NormError::AsymmetricMatrix)));
    let indef = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    assert!(matches!(NormSpec::ellipsoidal(indef), Err(NormError::NotPositiveDefinite)));
    // Missing -v for a vertex.
    let bad = NormSpec::polyhedral(
        2,
        vec![dvector![1.0, 0.0], dvector![-1.0, 0.0], dvector![0.0, 1.0], dvector![0.3, -0.9]],
    );
    assert!(matches!(bad, Err(NormError::NotCentrallySymmetric)));
    // Vertices on a line do not span the plane.
    let flat = NormSpec::polyhedral(
        2,
        vec![dvector![1.0, 0.0], dvector![-1.0, 0.0], dvector![2.0, 0.0], dvector![-2.0, 0.0]],
    );
    assert!(matches!(flat, Err(NormError::DegenerateVertices)));
}
