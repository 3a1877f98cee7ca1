mod common;

use common::*;
use linegeo::cl33::{i33, Multivector};
use linegeo::gc4::{bracket, meet_planes, plucker_line, CoPlane, HomPoint};
use linegeo::linalg::{j6, t4, Mat4};
use linegeo::plucker::*;
use linegeo::Error;
use proptest::prelude::*;

fn point_of(v: nalgebra::Vector4<f64>) -> HomPoint {
    HomPoint::from_vec4(&v)
}

fn plane_of(v: nalgebra::Vector4<f64>) -> CoPlane {
    CoPlane::from_vec4(&v)
}

fn mv(t: &Trivector33) -> Multivector {
    *t.as_multivector()
}

fn lifted_sign_free(a: &Mat4, b: &Mat4) -> f64 {
    linegeo::check::sign_free(a, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn point_covariance(mut s in sampler()) {
        let (a, x) = (s.gl4(), s.hom_point());
        let lhs = mv(&rep_point(&point_of(a * x.to_vec4())).unwrap()) * a.determinant();
        let rhs = mv(&apply3(&lift2(&a).unwrap(), &rep_point(&x).unwrap()));
        prop_assert!(mv_rel(&lhs, &rhs) < 1e-9);
    }

    #[test]
    fn polarity_covariance(mut s in sampler()) {
        let (d, x) = (s.gl4(), s.hom_point());
        let lhs = mv(&rep_plane(&plane_of(d * x.to_vec4())).unwrap()) * d.determinant();
        let rhs = mv(&apply3(&dual_lift2(&d).unwrap(), &rep_point(&x).unwrap()));
        prop_assert!(mv_rel(&lhs, &rhs) < 1e-9);
    }

    #[test]
    fn plane_covariance_under_inverse_transpose(mut s in sampler()) {
        let (a, p) = (s.gl4(), s.plane());
        let a_it = a.try_inverse().unwrap().transpose();
        let lhs = mv(&rep_plane(&plane_of(a_it * p.to_vec4())).unwrap());
        let rhs = mv(&apply3(&lift2(&a).unwrap(), &rep_plane(&p).unwrap()));
        prop_assert!(up_to_scale(lhs.coeffs(), rhs.coeffs()) < 1e-9);
    }

    #[test]
    fn pairing_is_minus_bracket_squared(x in hom_point(), p in plane()) {
        let got = mv(&rep_point(&x).unwrap()).dot(&mv(&rep_plane(&p).unwrap())).scalar_part();
        let br = x.x0 * p.d + x.x.dot(&p.n);
        let scale = (x.to_vec4().norm() * p.to_vec4().norm()).powi(2);
        prop_assert!((got + br * br).abs() <= 1e-12 * scale);
        prop_assert!((bracket(&x, &p) - br).abs() <= 1e-15 * scale.sqrt());
    }

    #[test]
    fn point_rep_is_independent_of_auxiliary_points(mut s in sampler()) {
        let x = s.hom_point();
        let others = [s.hom_point(), s.hom_point(), s.hom_point()];
        let mut w = Multivector::scalar(1.0);
        for p in &others {
            w = w.wedge(&plucker_line(&x, p).unwrap().to_multivector());
        }
        let m = Mat4::from_columns(&[x.to_vec4(), others[0].to_vec4(), others[1].to_vec4(), others[2].to_vec4()]);
        prop_assume!(m.determinant().abs() > 1e-3);
        prop_assert!(mv_rel(&(w * (1.0 / m.determinant())), &mv(&rep_point(&x).unwrap())) < 1e-9);
    }

    #[test]
    fn plane_rep_is_independent_of_auxiliary_planes(mut s in sampler()) {
        let p = s.plane();
        let others = [s.plane(), s.plane(), s.plane()];
        let mut w = Multivector::scalar(1.0);
        for q in &others {
            w = w.wedge(&meet_planes(&p, q).unwrap().to_multivector());
        }
        let m = Mat4::from_columns(&[p.to_vec4(), others[0].to_vec4(), others[1].to_vec4(), others[2].to_vec4()]);
        prop_assume!(m.determinant().abs() > 1e-3);
        prop_assert!(mv_rel(&(w * (1.0 / m.determinant())), &mv(&rep_plane(&p).unwrap())) < 1e-9);
    }

    #[test]
    fn points_and_planes_are_eigenvectors_of_the_pseudoscalar(x in hom_point(), p in plane()) {
        let f = mv(&rep_point(&x).unwrap());
        let g = mv(&rep_plane(&p).unwrap());
        prop_assert!(mv_rel(&f.dot(&i33()), &f) < 1e-12);
        prop_assert!(mv_rel(&g.dot(&i33()), &(-g)) < 1e-12);
    }

    #[test]
    fn plane_is_j_image_of_point(x in hom_point()) {
        let lhs = rep_plane(&CoPlane::new(x.x0, x.x)).unwrap();
        let rhs = apply3(&j6(), &rep_point(&x).unwrap());
        prop_assert!(mv_rel(&mv(&lhs), &mv(&rhs)) < 1e-14);
    }

    #[test]
    fn determinant_laws(a in gl4()) {
        let d3 = a.determinant().powi(3);
        prop_assert!((lift2(&a).unwrap().determinant() / d3 - 1.0).abs() < 1e-9);
        prop_assert!((dual_lift2(&a).unwrap().determinant() / d3 + 1.0).abs() < 1e-9);
    }

    #[test]
    fn lifts_compose(a in gl4(), b in gl4()) {
        prop_assert!(linegeo::check::homomorphism_error(&a, &b) < 1e-10);
    }

    #[test]
    fn lift_preserves_the_line_quadric_up_to_det(a in gl4()) {
        let l = lift2(&a).unwrap();
        let g = l.transpose() * j6() * l;
        prop_assert!(rel(g.as_slice(), (j6() * a.determinant()).as_slice()) < 1e-10);
        let d = dual_lift2(&a).unwrap();
        let g = d.transpose() * j6() * d;
        prop_assert!(rel(g.as_slice(), (j6() * a.determinant()).as_slice()) < 1e-10);
    }

    #[test]
    fn recovery_inverts_both_lifts(mut s in sampler()) {
        let a = if s.coin() { s.sl4() } else { s.sl4_small_corner() };
        let r = recover_mat4(&lift2(&a).unwrap()).unwrap();
        prop_assert_eq!(r.branch, Branch { kind: MapKind::Transformation, det: DetSign::Plus });
        prop_assert!(lifted_sign_free(&r.matrix, &a) < 1e-8);
        let r = recover_mat4(&dual_lift2(&a).unwrap()).unwrap();
        prop_assert_eq!(r.branch, Branch { kind: MapKind::Polarity, det: DetSign::Plus });
        prop_assert!(lifted_sign_free(&r.matrix, &a) < 1e-8);
    }

    #[test]
    fn recovery_reads_the_determinant_sign(mut s in sampler()) {
        let a = s.sl4() * t4();
        let r = recover_mat4(&lift2(&a).unwrap()).unwrap();
        prop_assert_eq!(r.branch.det, DetSign::Minus);
        prop_assert!(lifted_sign_free(&r.matrix, &a) < 1e-8);
        let r = recover_mat4(&dual_lift2(&a).unwrap()).unwrap();
        prop_assert_eq!(r.branch, Branch { kind: MapKind::Polarity, det: DetSign::Minus });
        prop_assert!(lifted_sign_free(&r.matrix, &a) < 1e-8);
    }

    #[test]
    fn recovery_ignores_positive_scale(mut s in sampler(), k in 0.1..10.0f64) {
        let a = s.sl4();
        let r = recover_mat4(&(lift2(&a).unwrap() * k)).unwrap();
        prop_assert!(lifted_sign_free(&r.matrix, &a) < 1e-8);
    }

    #[test]
    fn intersection_dimension_parity(mut s in sampler()) {
        let pick = |s: &mut linegeo::random::Sampler| {
            if s.coin() {
                (rep_point(&s.hom_point()).unwrap(), Null3Kind::Point)
            } else {
                (rep_plane(&s.plane()).unwrap(), Null3Kind::Plane)
            }
        };
        let (ta, ka) = pick(&mut s);
        let (tb, kb) = pick(&mut s);
        let dim = intersection_dim(&ta, &tb);
        prop_assert_eq!(dim % 2 == 1, ka == kb, "dim {}", dim);
        prop_assert_eq!(intersection_dim(&ta, &ta), 3);
    }

    #[test]
    fn point_through_plane_meets_in_a_plane_pencil(mut s in sampler()) {
        // an incident point and plane share a 2-space, a non-incident pair nothing
        let p = s.plane();
        let x = s.hom_point();
        let n = p.to_vec4();
        let on = point_of(x.to_vec4() - n * (x.to_vec4().dot(&n) / n.norm_squared()));
        prop_assume!(on.to_vec4().norm() > 1e-2);
        let tp = rep_plane(&p).unwrap();
        prop_assert_eq!(intersection_dim(&rep_point(&on).unwrap(), &tp), 2);
        let off = bracket(&x, &p).abs() / (x.to_vec4().norm() * n.norm());
        prop_assume!(off > 1e-2);
        prop_assert_eq!(intersection_dim(&rep_point(&x).unwrap(), &tp), 0);
    }

    #[test]
    fn classify_and_recover_round_trip(x in hom_point(), p in plane(), k in -5.0..5.0f64) {
        prop_assume!(k.abs() > 0.1);
        let t = Trivector33::new(mv(&rep_point(&x).unwrap()) * k).unwrap();
        prop_assert_eq!(classify_null3(&t), Ok(Null3Kind::Point));
        let back = recover_point(&t).unwrap();
        prop_assert!(up_to_scale(back.to_vec4().as_slice(), x.to_vec4().as_slice()) < 1e-9);
        prop_assert!((back.to_vec4().norm() - 1.0).abs() < 1e-12);

        let t = Trivector33::new(mv(&rep_plane(&p).unwrap()) * k).unwrap();
        prop_assert_eq!(classify_null3(&t), Ok(Null3Kind::Plane));
        let back = recover_plane(&t).unwrap();
        prop_assert!(up_to_scale(back.to_vec4().as_slice(), p.to_vec4().as_slice()) < 1e-9);
        prop_assert_eq!(recover_point(&t).unwrap_err(), Error::NotAPoint);
    }

    #[test]
    fn sums_of_distinct_points_are_not_null(x in hom_point(), y in hom_point()) {
        prop_assume!(up_to_scale(x.to_vec4().as_slice(), y.to_vec4().as_slice()) > 1e-2);
        let t = Trivector33::new(mv(&rep_point(&x).unwrap()) + mv(&rep_point(&y).unwrap())).unwrap();
        prop_assert_eq!(classify_null3(&t), Err(Error::NotNull3Space));
    }

    #[test]
    fn normalized_is_scale_invariant(x in hom_point(), k in -5.0..5.0f64) {
        prop_assume!(k.abs() > 0.1);
        let t = rep_point(&x).unwrap();
        let u = Trivector33::new(mv(&t) * k).unwrap();
        prop_assert!(mv_rel(&mv(&t.normalized()), &mv(&u.normalized())) < 1e-14);
        prop_assert!((t.normalized().as_multivector().max_abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn trivector_json_round_trip(x in hom_point()) {
        let t = rep_point(&x).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        prop_assert_eq!(serde_json::from_str::<Trivector33>(&s).unwrap(), t);
    }
}

#[test]
fn trivector_rejects_other_grades() {
    let m = Multivector::blade("12").unwrap();
    assert_eq!(Trivector33::new(m).unwrap_err(), Error::WrongGrade(3));
    assert!(serde_json::from_str::<Trivector33>(r#"{"12":1}"#).is_err());
}

#[test]
fn singular_matrices_are_not_lifted() {
    let mut a = Mat4::identity();
    a[(2, 2)] = 0.0;
    assert_eq!(lift2(&a).unwrap_err(), Error::Singular);
    assert_eq!(dual_lift2(&a).unwrap_err(), Error::Singular);
}

#[test]
fn non_regular_six_by_six_is_refused() {
    let mut b = linegeo::linalg::Mat6::identity();
    b[(0, 3)] = 1.0;
    assert_eq!(recover_mat4(&b).unwrap_err(), Error::NotRegular);
}

#[test]
fn branch_display() {
    let b = Branch { kind: MapKind::Polarity, det: DetSign::Minus };
    assert_eq!(b.to_string(), "polarity det-1");
    assert_eq!(serde_json::to_value(b).unwrap(), serde_json::json!({"kind": "polarity", "det": "det-1"}));
}
