mod common;

use common::*;
use linegeo::cl33::Vector33;
use linegeo::linalg::{j6, Mat3, Vec3};
use linegeo::plucker::{lift2, outermorphism, recover_mat4};
use linegeo::screw::*;
use linegeo::versor::{adjoint_matrix, perpendicular, RigidMotion};
use linegeo::Error;
use proptest::prelude::*;

fn algebra() -> impl Strategy<Value = Algebra> {
    proptest::sample::select(Algebra::ALL.to_vec())
}

fn screw_in(a: Algebra) -> impl Strategy<Value = Screw> {
    (vec3(), vec3()).prop_map(move |(v, t)| Screw::new(a, v, t))
}

fn se3() -> impl Strategy<Value = Screw> {
    screw_in(Algebra::Se3)
}

fn v33_rel(a: &Vector33, b: &Vector33) -> f64 {
    rel(a.to_vec6().as_slice(), b.to_vec6().as_slice())
}

fn cross(a: Algebra, x: &Screw, y: &Screw) -> Screw {
    algebra_cross(a, x, y).unwrap()
}

fn flat(s: &Superscrew) -> Vec<f64> {
    s.0.iter().flat_map(|v| v.iter().copied()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn closed_form_matches_commutator(a in algebra(), x in vec3(), y in vec3(), u in vec3(), w in vec3()) {
        let (s1, s2) = (Screw::new(a, x, y), Screw::new(a, u, w));
        prop_assert!(linegeo::check::algebra_error(a, &s1, &s2) < 1e-12, "{}", a);
    }

    #[test]
    fn brackets_are_antisymmetric_and_satisfy_jacobi(a in algebra(), p in vec3(), q in vec3(), r in vec3(), s in vec3(), t in vec3(), u in vec3()) {
        let (x, y, z) = (Screw::new(a, p, q), Screw::new(a, r, s), Screw::new(a, t, u));
        let xy = cross(a, &x, &y).to_vector33();
        let yx = cross(a, &y, &x).to_vector33();
        prop_assert!((xy + yx).to_vec6().norm() < 1e-15 * (1.0 + xy.to_vec6().norm()));
        let j = cross(a, &x, &cross(a, &y, &z)).to_vector33()
            + cross(a, &y, &cross(a, &z, &x)).to_vector33()
            + cross(a, &z, &cross(a, &x, &y)).to_vector33();
        prop_assert!(j.to_vec6().norm() < 1e-14, "{}", a);
    }

    #[test]
    fn lift_and_unlift_are_inverse(a in algebra(), v in vec3(), t in vec3()) {
        let s = Screw::new(a, v, t);
        let b = algebra_lift(&s);
        prop_assert!(b.is_grade(2, 0.0));
        let (back, res) = algebra_unlift(a, &b);
        prop_assert!(res < 1e-13);
        prop_assert!(v33_rel(&back.to_vector33(), &s.to_vector33()) < 1e-13);
    }

    #[test]
    fn se3_lift_is_contraction_with_c3(x in vec3(), y in vec3()) {
        let s = Screw::se3(x, y);
        let b = algebra_lift(&s);
        prop_assert!(up_to_scale(b.coeffs(), c3_lift(&s.to_vector33()).coeffs()) < 1e-12);
    }

    #[test]
    fn euclidean_covariance(m in rigid_motion(), x in se3(), y in se3()) {
        let b = lift2(&m.to_mat4()).unwrap();
        let mv = |s: &Screw| Screw::from_vector33(Algebra::Se3, &Vector33::from_vec6(&(b * s.to_vector33().to_vec6())));
        let lhs = se3_cross(&mv(&x), &mv(&y)).unwrap();
        let rhs = mv(&se3_cross(&x, &y).unwrap());
        prop_assert!(v33_rel(&lhs.to_vector33(), &rhs.to_vector33()) < 1e-12);
    }

    #[test]
    fn triple_product(a in se3(), b in se3(), c in se3()) {
        prop_assert!(linegeo::check::triple_product_error(&a, &b, &c) < 1e-13);
    }

    #[test]
    fn decomposition_lemma(x in vec3(), y in vec3()) {
        let z = x.cross(&y);
        prop_assume!(z.norm() > 1e-3);
        let lhs = Screw::se3(z.cross(&x) / z.norm_squared(), z.cross(&y) / z.norm_squared());
        let c = se3_cross(&lhs, &Screw::se3(z, Vec3::zeros())).unwrap();
        prop_assert!(v33_rel(&c.to_vector33(), &Vector33::new(x, y)) < 1e-10);
    }

    #[test]
    fn orthogonal_decomposition(v1 in unit3(), l in -1.0..1.0f64, m in -1.0..1.0f64) {
        let v2 = perpendicular(&v1);
        let v3 = v1.cross(&v2);
        let lhs = Screw::se3(v1, l * v3.cross(&v1) + m * v1);
        let rhs = se3_cross(&Screw::se3(v2, l * v3.cross(&v2)), &Screw::se3(v3, m * v3)).unwrap();
        prop_assert!(v33_rel(&lhs.to_vector33(), &rhs.to_vector33()) < 1e-13);
    }

    #[test]
    fn exp_is_the_matrix_exponential(s in se3()) {
        let s = Screw::se3(s.v * 2.0, s.t * 2.0);
        let m = se3_exp(&s).unwrap().to_mat4();
        let want = se3_matrix(&s).exp();
        prop_assert!(rel(m.as_slice(), want.as_slice()) < 1e-12);
    }

    #[test]
    fn log_inverts_exp(m in rigid_motion()) {
        let back = se3_exp(&se3_log(&m)).unwrap();
        prop_assert!(rel(back.to_mat4().as_slice(), m.to_mat4().as_slice()) < 1e-10);
        prop_assert!(se3_log(&m).v.norm() <= std::f64::consts::PI + 1e-12);
    }

    #[test]
    fn bivector_exponential_induces_the_motion(m in rigid_motion()) {
        let u = se3_bivector(&m).exp().unwrap();
        let r = recover_mat4(&adjoint_matrix(&u, false)).unwrap();
        prop_assert!(linegeo::check::sign_free(&r.matrix, &m.to_mat4()) < 1e-9);
    }

    #[test]
    fn axis_reconstructs_the_screw(l in unit3(), c0 in vec3(), k in 0.1..3.0f64, h in -1.0..1.0f64) {
        let c = c0 - c0.dot(&l) * l;
        let s = Screw::se3(l * k, (c.cross(&l) + h * l) * k);
        let a = s.axis().unwrap();
        prop_assert!((a.direction - l).norm() < 1e-12);
        prop_assert!((a.center - c).norm() < 1e-12);
        prop_assert!((a.ratio - h).abs() < 1e-12);
        prop_assert!((a.angle - k).abs() < 1e-12);
    }

    #[test]
    fn common_perpendicular_of_two_axes(mut s in sampler()) {
        let a = linegeo::check::random_line_screw(&mut s);
        let b = linegeo::check::random_line_screw(&mut s);
        prop_assume!(a.v.cross(&b.v).norm() > 1e-2);
        prop_assert!(linegeo::check::perpendicular_error(&a, &b) < 1e-10);
    }

    #[test]
    fn virtual_work_formula(m in se3(), f in vec3(), q in vec3(), lambda in -3.0..3.0f64) {
        let w = Wrench::new(f, q);
        let want = -2.0 * m.v.dot(&q) - (1.0 + lambda * lambda) * m.t.dot(&f);
        prop_assert!((virtual_work(&m, &w, lambda) - want).abs() < 1e-12 * (1.0 + want.abs()));
    }

    #[test]
    fn inv22_brackets(x in vec3(), y in vec3()) {
        prop_assert!(linegeo::check::inv22_error(&x, &y) < 1e-13);
    }

    #[test]
    fn superscrew_bracket(a in traceless4(), b in traceless4()) {
        prop_assert!(linegeo::check::superscrew_error(&a, &b) < 1e-12);
    }

    #[test]
    fn superscrew_round_trips(m in traceless4()) {
        let s = Superscrew::from_sl4(&m).unwrap();
        prop_assert!(rel(s.to_sl4().as_slice(), m.as_slice()) < 1e-14);
        let back = Superscrew::from_bivector(&s.to_bivector());
        prop_assert!(rel(&flat(&back), &flat(&s)) < 1e-14);
        let text = serde_json::to_string(&s).unwrap();
        prop_assert_eq!(serde_json::from_str::<Superscrew>(&text).unwrap(), s);
    }

    #[test]
    fn sl4_bivector_round_trip(m in traceless4()) {
        let b = sl4_to_bivector(&m).unwrap();
        prop_assert!(rel(bivector_to_sl4(&b).unwrap().as_slice(), m.as_slice()) < 1e-14);
    }

    #[test]
    fn sl4_lift_is_a_homomorphism(a in traceless4(), b in traceless4()) {
        let (la, lb) = (sl4_to_mat6(&a).unwrap(), sl4_to_mat6(&b).unwrap());
        let lc = sl4_to_mat6(&(a * b - b * a)).unwrap();
        prop_assert!(rel(lc.as_slice(), (la * lb - lb * la).as_slice()) < 1e-12);
    }

    #[test]
    fn sl4_lift_differentiates_the_plucker_transform(m in traceless4()) {
        let m = m * 0.5;
        let lhs = lift2(&m.exp()).unwrap();
        prop_assert!(rel(lhs.as_slice(), sl4_to_mat6(&m).unwrap().exp().as_slice()) < 1e-10);
        let ad = adjoint_matrix(&sl4_to_bivector(&m).unwrap().exp().unwrap(), false);
        prop_assert!(rel(ad.as_slice(), lhs.as_slice()) < 1e-10);
    }

    #[test]
    fn transpose_duality(m in traceless4()) {
        let lhs = outermorphism(&j6(), &sl4_to_bivector(&m).unwrap());
        prop_assert!(mv_rel(&lhs, &sl4_to_bivector(&-m.transpose()).unwrap()) < 1e-13);
    }

    #[test]
    fn generators_exponentiate_to_their_matrices(x in vec3(), kind in 0usize..4, fam in 0usize..6, t in -1.0..1.0f64) {
        let g = match kind {
            0 => Generator::Perspectivity { x },
            1 => Generator::Dilation { t: x },
            2 => Generator::Isotropic { t },
            _ => Generator::Shear { family: ShearFamily::ALL[fam].parse().unwrap(), t: x },
        };
        let ad = adjoint_matrix(&generator_bivector(&g).exp().unwrap(), false);
        let want = lift2(&generator_matrix(&g)).unwrap();
        prop_assert!(up_to_scale(ad.as_slice(), want.as_slice()) < 1e-10, "{:?}", g);
        let text = serde_json::to_string(&g).unwrap();
        prop_assert_eq!(serde_json::from_str::<Generator>(&text).unwrap(), g);
    }

    #[test]
    fn screw_json_round_trip(a in algebra(), v in vec3(), t in vec3()) {
        let s = Screw::new(a, v, t);
        let text = serde_json::to_string(&s).unwrap();
        prop_assert_eq!(serde_json::from_str::<Screw>(&text).unwrap(), s);
    }
}

#[test]
fn algebras_do_not_mix() {
    let a = Screw::new(Algebra::So4, Vec3::x(), Vec3::zeros());
    let b = Screw::se3(Vec3::y(), Vec3::zeros());
    assert_eq!(se3_cross(&a, &b).unwrap_err(), Error::AlgebraMismatch("se3", "so4"));
    assert!(algebra_cross(Algebra::So4, &a, &b).is_err());
    assert_eq!(algebra_trivector(Algebra::Gad).unwrap_err(), Error::NoTrivector("gad"));
}

#[test]
fn algebra_names_parse() {
    for a in Algebra::ALL {
        assert_eq!(a.name().parse::<Algebra>().unwrap(), a);
    }
    assert!("so5".parse::<Algebra>().is_err());
    let s: Screw = serde_json::from_str(r#"{"v":[1,0,0],"t":[0,0,0]}"#).unwrap();
    assert_eq!(s.algebra, Algebra::Se3);
}

#[test]
fn parallel_axes_have_no_common_perpendicular() {
    let a = Screw::se3(Vec3::x(), Vec3::zeros());
    let b = Screw::se3(Vec3::x() * 2.0, Vec3::new(0.0, 0.0, 1.0));
    assert_eq!(common_perpendicular(&a, &b).unwrap_err(), Error::ParallelAxes);
    assert!(common_perpendicular(&Screw::se3(Vec3::zeros(), Vec3::x()), &a).is_err());
}

#[test]
fn sl4_maps_need_traceless_input() {
    assert_eq!(sl4_to_mat6(&linegeo::linalg::Mat4::identity()).unwrap_err(), Error::NotTraceless);
    assert_eq!(bivector_to_sl4(&linegeo::cl33::c3()).unwrap_err(), Error::WrongGrade(2));
}

#[test]
fn translations_through_exp() {
    let m = se3_exp(&Screw::se3(Vec3::zeros(), Vec3::new(1.0, 2.0, 3.0))).unwrap();
    assert_eq!(m, RigidMotion::translation(Vec3::new(1.0, 2.0, 3.0)));
    assert_eq!(m.r, Mat3::identity());
}
