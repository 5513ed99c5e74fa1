use nalgebra::{dvector, DMatrix};

use super::*;
use crate::norms::PExponent;

fn linf2() -> NormSpec<f64> {
    NormSpec::p_norm(2, PExponent::Infinity).unwrap()
}

fn euclid(dim: usize) -> NormSpec<f64> {
    NormSpec::euclidean(dim).unwrap()
}

fn lp(dim: usize, p: f64) -> NormSpec<f64> {
    NormSpec::p_norm(dim, PExponent::Finite(p)).unwrap()
}

#[test]
fn membership_examples() {
    let n = euclid(2);
    let b = Bisector::new(&n, dvector![0.0, 0.0], dvector![1.0, 0.0]).unwrap();
    assert!(b.membership(&dvector![0.5, 7.0], 1e-9).unwrap().is_member);

    let n = linf2();
    let b = Bisector::new(&n, dvector![0.0, 0.0], dvector![1.0, 0.0]).unwrap();
    let m = b.membership(&dvector![3.0, 5.0], 1e-9).unwrap();
    assert!(m.is_member);
    assert_eq!(m.residual, 0.0); // both distances are exactly 5

    for n in [euclid(2), linf2(), lp(2, 3.0)] {
        let b = Bisector::new(&n, dvector![0.3, -1.0], dvector![2.0, 0.7]).unwrap();
        let mid = (&b.x + &b.y) / 2.0;
        // Exact up to evaluation rounding.
        assert!(b.membership(&mid, 1e-12).unwrap().residual < 1e-15);
    }
}

#[test]
fn distinct_points_required() {
    let n = euclid(2);
    assert!(matches!(
        Bisector::new(&n, dvector![1.0, 2.0], dvector![1.0, 2.0]),
        Err(BisectorError::CoincidentPoints)
    ));
}

#[test]
fn line_intersect_perpendicular_bisector() {
    let n = euclid(2);
    let b = Bisector::new(&n, dvector![0.0, 0.0], dvector![1.0, 0.0]).unwrap();
    let pts = b.line_intersect(&dvector![0.0, 3.0], 1e-9).unwrap();
    assert_eq!(pts.len(), 1);
    assert!((pts[0].clone() - dvector![0.5, 3.0]).norm() < 1e-9, "got {}", pts[0]);
}

#[test]
fn line_intersect_unique_root_for_diagonal_axis() {
    let n = linf2();
    let b = Bisector::new(&n, dvector![0.0, 0.0], dvector![1.0, 1.0]).unwrap();
    let pts = b.line_intersect(&dvector![2.0, 0.0], 1e-9).unwrap();
    assert_eq!(pts.len(), 1, "no sphere segment is parallel to (1,1)");
    assert!((pts[0].clone() - dvector![1.5, -0.5]).norm() < 1e-9, "got {}", pts[0]);
}

#[test]
fn line_intersect_flat_interval_endpoints() {
    let n = linf2();
    let b = Bisector::new(&n, dvector![0.0, 0.0], dvector![1.0, 0.0]).unwrap();
    let pts = b.line_intersect(&dvector![0.0, 2.0], 1e-9).unwrap();
    assert_eq!(pts.len(), 2, "h vanishes on an interval along this line");
    assert!((pts[0].clone() - dvector![-1.0, 2.0]).norm() < 1e-7, "left {}", pts[0]);
    assert!((pts[1].clone() - dvector![2.0, 2.0]).norm() < 1e-7, "right {}", pts[1]);
}

#[test]
fn line_intersect_points_pass_membership() {
    let mut rng = crate::rng::chacha(5);
    for n in [euclid(3), lp(3, 4.0), lp(3, 1.5), NormSpec::p_norm(3, PExponent::Infinity).unwrap()]
    {
        let b = Bisector::new(&n, dvector![0.1, -0.3, 0.2], dvector![1.0, 0.5, -0.4]).unwrap();
        for _ in 0..25 {
            let anchor = crate::rng::gaussian_vector::<f64>(&mut rng, 3) * 3.0;
            for p in b.line_intersect(&anchor, 1e-9).unwrap() {
                let m = b.membership(&p, 1e-9).unwrap();
                assert!(m.is_member, "residual {}", m.residual);
            }
        }
    }
}

#[test]
fn region_bounds_euclidean() {
    let n = euclid(2);
    let b = Bisector::new(&n, dvector![0.0, 0.0], dvector![1.0, 0.0]).unwrap();
    let rb = b.region_bounds(None).unwrap().expect("strictly convex");
    assert!((rb.p.clone() - dvector![0.0, 1.0]).norm() < 1e-12, "p = {}", rb.p);
    assert_eq!(rb.line_through_x.base, dvector![0.0, 0.0]);
    assert_eq!(rb.line_through_y.base, dvector![1.0, 0.0]);
}

#[test]
fn region_bounds_quartic_diagonal() {
    let n = lp(2, 4.0);
    let b = Bisector::new(&n, dvector![0.0, 0.0], dvector![1.0, 1.0]).unwrap();
    let rb = b.region_bounds(None).unwrap().expect("strictly convex");
    let c = 2.0_f64.powf(-0.25);
    assert!((rb.p.clone() - dvector![c, -c]).norm() < 1e-9, "p = {}", rb.p);
}

#[test]
fn region_bounds_none_when_facet_is_parallel() {
    let n = linf2();
    let b = Bisector::new(&n, dvector![0.0, 0.0], dvector![1.0, 0.0]).unwrap();
    assert!(b.region_bounds(None).unwrap().is_none());
}

#[test]
fn region_bounds_contain_sampled_points() {
    // Every sampled bisector point sits strictly between the two lines.
    let mut rng = crate::rng::chacha(9);
    for n in [euclid(2), lp(2, 4.0), lp(2, 1.5)] {
        let b = Bisector::new(&n, dvector![0.2, -0.1], dvector![1.3, 0.8]).unwrap();
        let rb = b.region_bounds(None).unwrap().expect("strictly convex");
        // Functional vanishing on p, oriented toward y.
        let mut nhat = dvector![-rb.p[1], rb.p[0]];
        let span = nhat.dot(&(&b.y - &b.x));
        if span < 0.0 {
            nhat = -nhat;
        }
        let span = nhat.dot(&(&b.y - &b.x));
        for _ in 0..60 {
            let anchor = crate::rng::gaussian_vector::<f64>(&mut rng, 2) * 10.0;
            for z in b.line_intersect(&anchor, 1e-9).unwrap() {
                let s = nhat.dot(&(&z - &b.x)) / span;
                assert!(s > 0.0 && s < 1.0, "point outside open region: s = {s}");
            }
        }
    }
}

#[test]
fn flat_ray_cone_square_example() {
    let n = linf2();
    let b = Bisector::new(&n, dvector![0.0, 0.0], dvector![1.0, 0.0]).unwrap();
    let seg = n
        .flat_segment_parallel_to(&(&b.x - &b.y), None)
        .unwrap()
        .expect("facet parallel to the axis");
    let cone = b.flat_ray_cone(&seg).unwrap();
    assert!((cone.apex.clone() - dvector![0.5, 0.5]).norm() < 1e-12, "apex {}", cone.apex);

    let p = cone.point_at(1.0, 0.0);
    assert!((p.clone() - dvector![-0.5, 1.5]).norm() < 1e-12);
    assert_eq!(n.eval(&(&p - &b.x)).unwrap(), 1.5);
    assert_eq!(n.eval(&(&p - &b.y)).unwrap(), 1.5);

    let p = cone.point_at(0.0, 3.0);
    assert!((p.clone() - dvector![3.5, 3.5]).norm() < 1e-12);
    assert_eq!(n.eval(&(&p - &b.x)).unwrap(), 3.5);
    assert_eq!(n.eval(&(&p - &b.y)).unwrap(), 3.5);
}

#[test]
fn flat_ray_cone_rejects_misaligned_segment() {
    let n = linf2();
    let b = Bisector::new(&n, dvector![0.0, 0.0], dvector![1.0, 1.0]).unwrap();
    let seg = n
        .flat_segment_parallel_to(&dvector![-1.0, 0.0], None)
        .unwrap()
        .expect("facet");
    assert!(matches!(b.flat_ray_cone(&seg), Err(BisectorError::SegmentNotAligned)));
}

#[test]
fn slab_fit_euclidean_is_flat() {
    let n = euclid(3);
    let b = Bisector::new(&n, dvector![0.0, 0.0, 0.0], dvector![1.0, 0.0, 0.0]).unwrap();
    let radii = [1.0, 4.0, 16.0];
    let (fit, cloud) = b.slab_fit(&radii, 32, 7, &SlabOptions::default()).unwrap();
    assert_eq!(fit.verdict, SlabVerdict::Sandwiched);
    let total = fit.widths_by_radius.last().unwrap().1;
    assert!(total < 1e-8, "width {total}");
    assert!(!cloud.is_empty());
    assert!(cloud.iter().all(|c| c.residual < 1e-8));
}

#[test]
fn slab_fit_square_cone_is_not_sandwiched() {
    let n = linf2();
    let b = Bisector::new(&n, dvector![0.0, 0.0], dvector![1.0, 0.0]).unwrap();
    let radii = [1.0, 4.0, 16.0, 64.0];
    let (fit, _) = b.slab_fit(&radii, 24, 7, &SlabOptions::default()).unwrap();
    assert_eq!(fit.verdict, SlabVerdict::NotSandwiched);
}

#[test]
fn slab_fit_rejects_bad_inputs() {
    let n = euclid(3);
    let b = Bisector::new(&n, dvector![0.0, 0.0, 0.0], dvector![1.0, 0.0, 0.0]).unwrap();
    assert!(matches!(
        b.slab_fit(&[1.0, 2.0], 2, 7, &SlabOptions::default()),
        Err(BisectorError::TooFewSamples(2))
    ));
    assert!(matches!(
        b.slab_fit(&[2.0, 1.0], 8, 7, &SlabOptions::default()),
        Err(BisectorError::BadRadii)
    ));
}

#[test]
fn reflection_euclidean_line() {
    let n = euclid(2);
    let r = reflection_isometry_check(&n, &dvector![0.5, 0.0], 200, 3).unwrap();
    assert!(r.bisector_is_line);
    let dir = r.line_direction.unwrap();
    assert!(dir[0].abs() < 1e-9, "line should be the vertical axis, dir = {dir}");
    assert!(r.isometry_residual.unwrap() < 1e-10);
}

#[test]
fn reflection_ellipsoid_line() {
    let q: DMatrix<f64> = DMatrix::from_diagonal(&dvector![1.0, 4.0]);
    let n = NormSpec::ellipsoidal(q).unwrap();
    let r = reflection_isometry_check(&n, &dvector![1.0, 0.0], 200, 3).unwrap();
    assert!(r.bisector_is_line);
    let dir = r.line_direction.unwrap();
    assert!(dir[0].abs() < 1e-9, "dir = {dir}");
    assert!(r.isometry_residual.unwrap() < 1e-9);
}

#[test]
fn reflection_square_not_a_line() {
    let n = linf2();
    let r = reflection_isometry_check(&n, &dvector![1.0, 0.0], 100, 3).unwrap();
    assert!(!r.bisector_is_line);
}
