//! Seeded property suites: each property draws random inputs, measures an
//! error against an independent formula and compares it with a tolerance.

use std::fmt::{self, Debug};
use std::str::FromStr;

use nalgebra::{DMatrix, Vector4};
use serde::Serialize;

use crate::cl33::{i33, k2, Blade, Multivector, Vector33};
use crate::gc4::{bracket, meet_planes, plucker_line, CoPlane, HomPoint};
use crate::linalg::{self, char_poly4, j6, proportional_error, Mat3, Mat4, Mat6, Vec3};
use crate::plucker::{apply3, classify_null3, dual_lift2, intersection_dim, lift2, outermorphism, recover_mat4};
use crate::plucker::{rep_plane, rep_point, Null3Kind, Trivector33};
use crate::random::Sampler;
use crate::screw::{self, maps, Algebra, Screw, Superscrew, Wrench};
use crate::versor::{self, PinSpElement, RigidForm, RigidMotion, TranslationForm};

/// Named groups of properties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Cl33,
    Plucker,
    Versor,
    Screw,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 5] = ["cl33", "plucker", "versor", "screw", "all"];
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "cl33" => Ok(Suite::Cl33),
            "plucker" => Ok(Suite::Plucker),
            "versor" => Ok(Suite::Versor),
            "screw" => Ok(Suite::Screw),
            "all" => Ok(Suite::All),
            _ => Err(format!("unknown suite {s:?}; expected one of {}", Suite::NAMES.join(", "))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = [Suite::Cl33, Suite::Plucker, Suite::Versor, Suite::Screw, Suite::All]
            .iter()
            .position(|s| s == self)
            .expect("listed");
        f.write_str(Suite::NAMES[i])
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub name: String,
    pub samples: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Inputs of the worst sample, only for failures.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub passed: bool,
    pub properties: Vec<PropertyReport>,
}

struct Runner {
    rng: Sampler,
    tol: Option<f64>,
    out: Vec<PropertyReport>,
}

impl Runner {
    fn prop<T: Debug>(&mut self, name: &str, samples: usize, tol: f64, mut f: impl FnMut(&mut Sampler) -> (f64, T)) {
        let tolerance = self.tol.unwrap_or(tol);
        let mut max_error = 0.0f64;
        let mut worst = None;
        for _ in 0..samples {
            let (e, input) = f(&mut self.rng);
            let e = if e.is_nan() { f64::INFINITY } else { e };
            if e > max_error || worst.is_none() {
                max_error = max_error.max(e);
                worst = Some(format!("{input:?}"));
            }
        }
        let passed = max_error <= tolerance;
        self.out.push(PropertyReport {
            name: name.to_string(),
            samples,
            max_error,
            tolerance,
            passed,
            counterexample: if passed { None } else { worst },
        });
    }
}

pub fn run_suite(suite: Suite, seed: u64, tol: Option<f64>) -> SuiteReport {
    let mut r = Runner { rng: Sampler::new(seed), tol, out: Vec::new() };
    match suite {
        Suite::Cl33 => cl33_suite(&mut r),
        Suite::Plucker => plucker_suite(&mut r),
        Suite::Versor => versor_suite(&mut r),
        Suite::Screw => screw_suite(&mut r),
        Suite::All => {
            cl33_suite(&mut r);
            plucker_suite(&mut r);
            versor_suite(&mut r);
            screw_suite(&mut r);
        }
    }
    let passed = r.out.iter().all(|p| p.passed);
    SuiteReport { suite, seed, passed, properties: r.out }
}

/// `|a - b| / max(|a|, |b|)` on coefficient vectors, 0 when both vanish.
pub fn rel(a: &[f64], b: &[f64]) -> f64 {
    let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let n = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let s = n(a).max(n(b));
    if s == 0.0 {
        0.0
    } else {
        d / s
    }
}

fn rel_mv(a: &Multivector, b: &Multivector) -> f64 {
    rel(a.coeffs(), b.coeffs())
}

fn rel_v33(a: &Vector33, b: &Vector33) -> f64 {
    rel(a.to_vec6().as_slice(), b.to_vec6().as_slice())
}

fn prop_err(a: &[f64], b: &[f64]) -> f64 {
    proportional_error(a, b)
}

fn cl33_suite(r: &mut Runner) {
    r.prop("associativity", 100, 1e-12, |s| {
        let (a, b, c) = (s.multivector(), s.multivector(), s.multivector());
        (rel_mv(&a.gp(&b).gp(&c), &a.gp(&b.gp(&c))), ())
    });
    r.prop("reverse_antiautomorphism", 100, 1e-12, |s| {
        let (a, b) = (s.multivector(), s.multivector());
        (rel_mv(&a.gp(&b).reverse(), &b.reverse().gp(&a.reverse())), ())
    });
    r.prop("grade_decomposition", 100, 0.0, |s| {
        let a = s.multivector();
        let sum: Multivector = (0..=6).map(|k| a.grade(k)).sum();
        (rel_mv(&sum, &a), ())
    });
    r.prop("metric_contract", 200, 1e-14, |s| {
        let (u, v) = (s.vector33(), s.vector33());
        let (mu, mv) = (u.to_multivector(), v.to_multivector());
        let lhs = mu.gp(&mv) + mv.gp(&mu);
        let want = 2.0 * (u.x.dot(&v.y) + u.y.dot(&v.x));
        (rel_mv(&lhs, &Multivector::scalar(want)), (u, v))
    });
    r.prop("pseudoscalar_square", 1, 0.0, |_| (rel_mv(&i33().gp(&i33()), &Multivector::scalar(1.0)), ()));
    r.prop("k2_square", 1, 1e-15, |_| {
        let want = Multivector::scalar(3.0) - k2().gp(&i33()) * 2.0;
        (rel_mv(&k2().gp(&k2()), &want), ())
    });
    r.prop("k2_inverse", 1, 1e-15, |_| {
        let inv = (k2() + i33() * 2.0) * (1.0 / 3.0);
        (rel_mv(&k2().gp(&inv), &Multivector::scalar(1.0)), ())
    });
    r.prop("k2_sandwich", 200, 1e-13, |s| {
        let x = s.vector33().to_multivector();
        let want = x - x.dot(&k2()).gp(&i33()) * 2.0;
        (rel_mv(&k2().gp(&x).gp(&k2()), &want), x)
    });
    r.prop("k2_sandwich_unprimed", 200, 1e-13, |s| {
        let x = Vector33::new(s.vec3(), Vec3::zeros()).to_multivector();
        let want = x - i33().gp(&x) * 2.0;
        (rel_mv(&k2().gp(&x).gp(&k2()), &want), x)
    });
    r.prop("k2_wedge_injective", 200, 1e-12, |s| {
        let x = s.vector33();
        let w = x.to_multivector().wedge(&k2());
        (rel_v33(&unwedge_k2(&w), &x), x)
    });
    r.prop("t_map_is_k2_contraction", 200, 1e-14, |s| {
        let x = s.vector33();
        let got = Vector33::from_multivector(&x.to_multivector().dot(&k2()), 1.0).unwrap_or(Vector33::zero());
        (rel_v33(&got, &x.t_image()), x)
    });
}

/// Least-squares inverse of `X -> X ^ K2`.
pub fn unwedge_k2(w: &Multivector) -> Vector33 {
    let g3: Vec<Blade> = Blade::of_grade(3).collect();
    let mut m = DMatrix::zeros(20, 6);
    for i in 0..6 {
        let img = Multivector::basis(Blade::generator(i)).wedge(&k2());
        for (row, b) in g3.iter().enumerate() {
            m[(row, i)] = img.get(*b);
        }
    }
    let rhs = DMatrix::from_iterator(20, 1, g3.iter().map(|b| w.get(*b)));
    let sol = m.svd(true, true).solve(&rhs, 1e-12).expect("svd");
    Vector33::from_vec6(&nalgebra::Vector6::from_iterator(sol.iter().copied()))
}

fn on_both(p: &CoPlane, q: &CoPlane) -> (HomPoint, HomPoint) {
    let m = DMatrix::from_row_slice(2, 4, &[p.d, p.n[0], p.n[1], p.n[2], q.d, q.n[0], q.n[1], q.n[2]]);
    let ns = linalg::null_space(&m, 1e-10);
    let col = |k: usize| HomPoint::from_vec4(&Vector4::from_iterator(ns.column(k).iter().copied()));
    (col(0), col(1))
}

fn plucker_suite(r: &mut Runner) {
    r.prop("join_is_null", 200, 1e-14, |s| {
        let (p, q) = (s.hom_point(), s.hom_point());
        let l = plucker_line(&p, &q).expect("generic points");
        (l.square().abs() / l.to_vec6().norm_squared(), (p, q))
    });
    r.prop("meet_equals_join", 200, 1e-12, |s| {
        let (p, q) = (s.plane(), s.plane());
        let l = meet_planes(&p, &q).expect("generic planes");
        let (a, b) = on_both(&p, &q);
        let j = plucker_line(&a, &b).expect("independent");
        let n = l.to_vec6().norm() * j.to_vec6().norm();
        let err = (l.dot(&j).abs() / n).max(l.square().abs() / l.to_vec6().norm_squared());
        (err.max(prop_err(l.to_vec6().as_slice(), j.to_vec6().as_slice())), (p, q))
    });
    r.prop("join_lies_on_plane", 200, 1e-12, |s| {
        let (p, q) = (s.plane(), s.plane());
        let (a, b) = on_both(&p, &q);
        let scale = a.to_vec4().norm() * p.to_vec4().norm();
        ((bracket(&a, &p) / scale).abs().max((bracket(&b, &q) / scale).abs()), (p, q))
    });
    r.prop("point_covariance", 100, 1e-9, |s| {
        let (a, x) = (s.gl4(), s.hom_point());
        let ax = HomPoint::from_vec4(&(a * x.to_vec4()));
        let lhs = *rep_point(&ax).unwrap().as_multivector() * a.determinant();
        let rhs = *apply3(&lift2(&a).unwrap(), &rep_point(&x).unwrap()).as_multivector();
        (rel_mv(&lhs, &rhs), (a, x))
    });
    r.prop("polarity_covariance", 100, 1e-9, |s| {
        let (d, x) = (s.gl4(), s.hom_point());
        let dx = CoPlane::from_vec4(&(d * x.to_vec4()));
        let lhs = *rep_plane(&dx).unwrap().as_multivector() * d.determinant();
        let rhs = *apply3(&dual_lift2(&d).unwrap(), &rep_point(&x).unwrap()).as_multivector();
        (rel_mv(&lhs, &rhs), (d, x))
    });
    r.prop("pairing", 200, 1e-12, |s| {
        let (x, p) = (s.hom_point(), s.plane());
        let f = rep_point(&x).unwrap();
        let g = rep_plane(&p).unwrap();
        let got = f.as_multivector().dot(g.as_multivector()).scalar_part();
        let want = -bracket(&x, &p).powi(2);
        let scale = (x.to_vec4().norm() * p.to_vec4().norm()).powi(2);
        ((got - want).abs() / scale, (x, p))
    });
    r.prop("plane_is_j_image_of_point", 100, 1e-14, |s| {
        let x = s.hom_point();
        let lhs = rep_plane(&CoPlane::new(x.x0, x.x)).unwrap();
        let rhs = apply3(&j6(), &rep_point(&x).unwrap());
        (rel_mv(lhs.as_multivector(), rhs.as_multivector()), x)
    });
    r.prop("point_basis_independence", 100, 1e-10, |s| {
        let x = s.hom_point();
        let a: Vec<HomPoint> = (0..3).map(|_| s.hom_point()).collect();
        let mut w = Multivector::scalar(1.0);
        for ai in &a {
            w = w.wedge(&plucker_line(&x, ai).unwrap().to_multivector());
        }
        let m = Mat4::from_columns(&[x.to_vec4(), a[0].to_vec4(), a[1].to_vec4(), a[2].to_vec4()]);
        let lhs = w * (1.0 / m.determinant());
        (rel_mv(&lhs, rep_point(&x).unwrap().as_multivector()), (x, a))
    });
    r.prop("determinant_laws", 100, 1e-10, |s| {
        let a = s.gl4();
        let e1 = (lift2(&a).unwrap().determinant() / a.determinant().powi(3) - 1.0).abs();
        let e2 = (dual_lift2(&a).unwrap().determinant() / a.determinant().powi(3) + 1.0).abs();
        (e1.max(e2), a)
    });
    r.prop("homomorphism", 100, 1e-10, |s| {
        let (a, b) = (s.gl4(), s.gl4());
        (homomorphism_error(&a, &b), (a, b))
    });
    r.prop("recover_round_trip", 100, 1e-8, |s| {
        let a = if s.coin() { s.sl4() } else { s.sl4_small_corner() };
        let got = recover_mat4(&lift2(&a).unwrap()).map(|x| x.matrix);
        (got.map_or(f64::INFINITY, |g| sign_free(&g, &a)), a)
    });
    r.prop("intersection_parity", 100, 0.0, |s| {
        let (ta, ka) = random_null3(s);
        let (tb, kb) = random_null3(s);
        let dim = intersection_dim(&ta, &tb);
        let bad = (dim % 2 == 1) != (ka == kb);
        (if bad { 1.0 } else { 0.0 }, (ka, kb, dim))
    });
    r.prop("classification", 100, 0.0, |s| {
        let (t, k) = random_null3(s);
        (if classify_null3(&t) == Ok(k) { 0.0 } else { 1.0 }, t)
    });
}

/// Largest of the four composition identities, relative.
pub fn homomorphism_error(a: &Mat4, b: &Mat4) -> f64 {
    let inv_t = |m: &Mat4| m.try_inverse().expect("invertible").transpose();
    let l = |m: &Mat4| lift2(m).expect("invertible");
    let d = |m: &Mat4| dual_lift2(m).expect("invertible");
    let m6 = |x: &Mat6, y: &Mat6| rel(x.as_slice(), y.as_slice());
    let e1 = m6(&l(&(a * b)), &(l(a) * l(b)));
    let e2 = m6(&(d(&(inv_t(a) * b)) * a.determinant()), &(l(a) * d(b)));
    let e3 = m6(&d(&(a * b)), &(d(a) * l(b)));
    let e4 = m6(&(l(&(inv_t(a) * b)) * a.determinant()), &(d(a) * d(b)));
    e1.max(e2).max(e3).max(e4)
}

/// `min(|a - b|, |a + b|) / |b|`, entrywise max norm.
pub fn sign_free(a: &Mat4, b: &Mat4) -> f64 {
    let s = b.amax();
    ((a - b).amax().min((a + b).amax())) / s
}

fn random_null3(s: &mut Sampler) -> (Trivector33, Null3Kind) {
    if s.coin() {
        (rep_point(&s.hom_point()).unwrap(), Null3Kind::Point)
    } else {
        (rep_plane(&s.plane()).unwrap(), Null3Kind::Plane)
    }
}

fn versor_suite(r: &mut Runner) {
    r.prop("double_cover", 100, 1e-12, |s| {
        let f: Vec<Vector33> = (0..3).map(|_| s.invertible_vector33()).collect();
        let mut g = f.clone();
        g[0] = -g[0];
        let (u, v) = (PinSpElement::from_factors(f).unwrap(), PinSpElement::from_factors(g).unwrap());
        (rel(u.mat6().as_slice(), v.mat6().as_slice()), u)
    });
    r.prop("kernel", 1, 1e-12, |_| {
        let m = PinSpElement::minus_one().mat6();
        let i = PinSpElement::pseudoscalar().mat6();
        let e = rel(m.as_slice(), Mat6::identity().as_slice()).max(rel(i.as_slice(), (-Mat6::identity()).as_slice()));
        (e, ())
    });
    r.prop("flag_parity", 100, 0.0, |s| {
        let a = random_element(s, true);
        let b = random_element(s, true);
        let c = a.compose(&b);
        let odd = (a.factors().len() + b.factors().len()) % 2 == 1;
        let bad = c.tflag() || c.component().odd != odd;
        (if bad { 1.0 } else { 0.0 }, (a, b))
    });
    r.prop("affinity_criterion", 100, 0.0, |s| {
        let u1 = s.invertible_vector33();
        let mut u2 = s.invertible_vector33();
        if s.coin() {
            u2.x = u1.x * s.range(0.5, 2.0);
        }
        let u = PinSpElement::from_factors(vec![u1, u2]).unwrap();
        let j = Trivector33::new(crate::cl33::j3()).unwrap();
        let img = apply3(&u.mat6(), &j);
        let preserved = prop_err(img.as_multivector().coeffs(), j.as_multivector().coeffs()) < 1e-9;
        let parallel = u1.x.cross(&u2.x).norm() <= 1e-12 * u1.x.norm() * u2.x.norm();
        (if preserved == parallel { 0.0 } else { 1.0 }, (u1, u2))
    });
    r.prop("trace_criterion", 100, 1e-13, |s| {
        let (u, v) = (s.invertible_vector33(), s.invertible_vector33());
        let m = PinSpElement::from_factors(vec![u, v]).unwrap().chain_matrix();
        let c = two_reflection_matrix(&u, &v);
        let e = (m + c).amax() / c.amax();
        (e.max((c.trace() - 2.0 * u.dot(&v)).abs() / (1.0 + c.amax())), (u, v))
    });
    versor_constructors(r);
    r.prop("rigid_composition", 100, 1e-9, |s| {
        let (a, b) = (s.rigid_motion(), s.rigid_motion());
        let u = versor::make_rigid_versor(&a, RigidForm::Fact1, None).unwrap();
        let v = versor::make_rigid_versor(&b, RigidForm::Fact2, None).unwrap();
        let got = u.compose(&v).to_mat4().matrix;
        (prop_err(got.as_slice(), a.compose(&b).to_mat4().as_slice()), (a, b))
    });
    r.prop("exponential_form", 100, 1e-9, |s| {
        let m = s.rigid_motion();
        let u = versor::make_rigid_versor(&m, RigidForm::Fact1, None).unwrap();
        let e = screw::se3_bivector(&m).exp().unwrap();
        (prop_err(u.expanded().coeffs(), e.coeffs()), m)
    });
    r.prop("normal_forms", 120, 1e-8, |s| {
        let fam = s.index(6);
        let (u, v) = normal_form_sample(s, fam);
        (normal_form_error(&u, &v, fam), (fam, u, v))
    });
}

/// Closed form of the two-reflection product `U^J V` as a 4x4 matrix;
/// the chain matrix of `[U, V]` is its negative.
pub fn two_reflection_matrix(u: &Vector33, v: &Vector33) -> Mat4 {
    let (x1, y1, x2, y2) = (u.x, u.y, v.x, v.y);
    let d = Mat3::identity() * x2.dot(&y1) + x1 * y2.transpose() - x2 * y1.transpose();
    linalg::blocks4(x1.dot(&y2), &x1.cross(&x2), &-y1.cross(&y2), &d)
}

fn random_element(s: &mut Sampler, t: bool) -> PinSpElement {
    let n = 1 + s.index(4);
    PinSpElement::new(t, (0..n).map(|_| s.invertible_vector33()).collect()).unwrap()
}

fn versor_constructors(r: &mut Runner) {
    r.prop("pi_rotation", 100, 1e-9, |s| {
        let x = s.unit3();
        let y0 = s.vec3();
        let y = y0 - y0.dot(&x) * x;
        let lambda = s.range(0.2, 3.0) * if s.coin() { 1.0 } else { -1.0 };
        let u = versor::make_pi_rotation(&x, &y, lambda).unwrap();
        let want = RigidMotion::screw(&x, &y, std::f64::consts::PI, 0.0).to_mat4();
        (prop_err(u.to_mat4().matrix.as_slice(), want.as_slice()), (x, y, lambda))
    });
    for (name, form) in [("rigid_fact1", RigidForm::Fact1), ("rigid_fact2", RigidForm::Fact2)] {
        r.prop(name, 100, 1e-9, |s| {
            let m = s.rigid_motion();
            let u = versor::make_rigid_versor(&m, form, None).unwrap();
            (prop_err(u.to_mat4().matrix.as_slice(), m.to_mat4().as_slice()), m)
        });
    }
    r.prop("plane_reflection", 100, 1e-9, |s| {
        let n = s.unit3();
        let d = s.uniform();
        let u = versor::make_plane_reflection(&n, d).unwrap();
        let want = linalg::blocks4(1.0, &Vec3::zeros(), &(-2.0 * d * n), &(Mat3::identity() - 2.0 * n * n.transpose()));
        (prop_err(u.to_mat4().matrix.as_slice(), want.as_slice()), (n, d))
    });
    for (name, form) in [("translation_opt1", TranslationForm::Opt1), ("translation_opt2", TranslationForm::Opt2)] {
        r.prop(name, 100, 1e-9, |s| {
            let t = s.vec3() * 3.0;
            let u = versor::make_translation(&t, form).unwrap();
            (prop_err(u.to_mat4().matrix.as_slice(), RigidMotion::translation(t).to_mat4().as_slice()), t)
        });
    }
}

/// A pair `(U, V)` of family `fam` (0-based), moved by a random lift.
pub fn normal_form_sample(s: &mut Sampler, fam: usize) -> (Vector33, Vector33) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let pair = |x: Vec3, y: Vec3| Vector33::new(x * h, y * h);
    let (e1, e2, e3) = (Vec3::x(), Vec3::y(), Vec3::z());
    let (u0, v0) = match fam {
        0 | 1 => {
            let th = s.range(0.1, std::f64::consts::PI - 0.1);
            let sg = if fam == 0 { 1.0 } else { -1.0 };
            let v = pair(e2, e2 * sg);
            (v * th.cos() + pair(e3, e3 * sg) * th.sin(), v)
        }
        2 | 3 => {
            let l = s.range(0.2, 2.0) * if s.coin() { 1.0 } else { -1.0 };
            let sg = if fam == 2 { 1.0 } else { -1.0 };
            let v = pair(e2, e2 * sg);
            (v + pair(e3, Vec3::zeros()) * l, v)
        }
        _ => {
            let a = s.range(0.2, 2.0) * if s.coin() { 1.0 } else { -1.0 };
            let mag = if fam == 4 { s.range(0.05, 0.9) } else { s.range(1.1, 3.0) };
            let b = a * mag * if s.coin() { 1.0 } else { -1.0 };
            (Vector33::new(e1 * (a + b), e1 * (a - b)), Vector33::new(e1, e1))
        }
    };
    let m = lift2(&s.sl4()).unwrap();
    let mv = |x: &Vector33| Vector33::from_vec6(&(m * x.to_vec6()));
    (mv(&u0), mv(&v0))
}

/// Family mismatch counts as error 1; otherwise the distance between the
/// characteristic polynomials of the induced matrix and the normal form
/// (or its negative).
pub fn normal_form_error(u: &Vector33, v: &Vector33, fam: usize) -> f64 {
    let Ok(nf) = versor::two_reflection_normal_form(u, v) else {
        return f64::INFINITY;
    };
    if nf.family.number() != fam + 1 {
        return 1.0;
    }
    let m = PinSpElement::from_factors(vec![*u, *v]).unwrap().to_mat4().matrix;
    let n = nf.matrix();
    let n = n / n.determinant().abs().powf(0.25);
    let pm = char_poly4(&m);
    let dist = |p: [f64; 4]| p.iter().zip(&pm).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let scale = pm.iter().fold(1.0f64, |a, b| a.max(b.abs()));
    dist(char_poly4(&n)).min(dist(char_poly4(&-n))) / scale
}

fn screw_suite(r: &mut Runner) {
    for a in Algebra::ALL {
        r.prop(&format!("{a}_commutator"), 100, 1e-12, |s| {
            let (s1, s2) = (Screw::new(a, s.vec3(), s.vec3()), Screw::new(a, s.vec3(), s.vec3()));
            (algebra_error(a, &s1, &s2), (s1, s2))
        });
    }
    r.prop("superscrew_bracket", 100, 1e-12, |s| {
        let (a, b) = (s.traceless4(), s.traceless4());
        (superscrew_error(&a, &b), (a, b))
    });
    r.prop("sl4_lift_homomorphism", 100, 1e-12, |s| {
        let (a, b) = (s.traceless4(), s.traceless4());
        let c = a * b - b * a;
        let (la, lb) = (screw::sl4_to_mat6(&a).unwrap(), screw::sl4_to_mat6(&b).unwrap());
        let lhs = screw::sl4_to_mat6(&c).unwrap();
        (rel(lhs.as_slice(), (la * lb - lb * la).as_slice()), (a, b))
    });
    r.prop("sl4_exponential", 50, 1e-10, |s| {
        let m = s.traceless4() * 0.5;
        let b = screw::sl4_to_bivector(&m).unwrap();
        let ad = versor::adjoint_matrix(&b.exp().unwrap(), false);
        (rel(ad.as_slice(), lift2(&m.exp()).unwrap().as_slice()), m)
    });
    r.prop("transpose_duality", 100, 1e-13, |s| {
        let m = s.traceless4();
        let lhs = outermorphism(&j6(), &screw::sl4_to_bivector(&m).unwrap());
        (rel_mv(&lhs, &screw::sl4_to_bivector(&-m.transpose()).unwrap()), m)
    });
    r.prop("euclidean_covariance", 100, 1e-12, |s| {
        let b = lift2(&s.rigid_motion().to_mat4()).unwrap();
        let (x, y) = (s.vector33(), s.vector33());
        let mv = |v: &Vector33| Vector33::from_vec6(&(b * v.to_vec6()));
        let cross = |p: &Vector33, q: &Vector33| {
            screw::se3_cross(&Screw::se3(p.x, p.y), &Screw::se3(q.x, q.y)).unwrap().to_vector33()
        };
        (rel_v33(&cross(&mv(&x), &mv(&y)), &mv(&cross(&x, &y))), (x, y))
    });
    r.prop("triple_product", 100, 1e-13, |s| {
        let (a, b, c) = (Screw::se3(s.vec3(), s.vec3()), Screw::se3(s.vec3(), s.vec3()), Screw::se3(s.vec3(), s.vec3()));
        (triple_product_error(&a, &b, &c), (a, b, c))
    });
    r.prop("decomposition_lemma", 100, 1e-12, |s| {
        let (x, y) = (s.vec3(), s.vec3());
        let z = x.cross(&y);
        let lhs = Screw::se3(z.cross(&x) / z.norm_squared(), z.cross(&y) / z.norm_squared());
        let c = screw::se3_cross(&lhs, &Screw::se3(z, Vec3::zeros())).unwrap();
        (rel_v33(&c.to_vector33(), &Vector33::new(x, y)), (x, y))
    });
    r.prop("orthogonal_screw_decomposition", 100, 1e-13, |s| {
        let v1 = s.unit3();
        let v2 = versor::perpendicular(&v1);
        let v3 = v1.cross(&v2);
        let (l, m) = (s.uniform(), s.uniform());
        let lhs = Screw::se3(v1, l * v3.cross(&v1) + m * v1);
        let rhs = screw::se3_cross(&Screw::se3(v2, l * v3.cross(&v2)), &Screw::se3(v3, m * v3)).unwrap();
        (rel_v33(&lhs.to_vector33(), &rhs.to_vector33()), (v1, l, m))
    });
    r.prop("exp_consistency", 100, 1e-9, |s| {
        let sc = Screw::se3(s.vec3() * 2.0, s.vec3() * 2.0);
        let m = screw::se3_exp(&sc).unwrap().to_mat4();
        let e = screw::se3_bivector(&screw::se3_exp(&sc).unwrap()).exp().unwrap();
        let got = recover_mat4(&versor::adjoint_matrix(&e, false)).map(|x| x.matrix);
        let want = m / m.determinant().powf(0.25);
        (got.map_or(f64::INFINITY, |g| sign_free(&g, &want)), sc)
    });
    r.prop("common_perpendicular", 100, 1e-10, |s| {
        let (a, b) = (random_line_screw(s), random_line_screw(s));
        (perpendicular_error(&a, &b), (a, b))
    });
    r.prop("virtual_work", 100, 1e-12, |s| {
        let (m, w) = (Screw::se3(s.vec3(), s.vec3()), Wrench::new(s.vec3(), s.vec3()));
        let lambda = [0.0, 1.0, -1.0, 2.0][s.index(4)];
        let want = -2.0 * m.v.dot(&w.q) - (1.0 + lambda * lambda) * m.t.dot(&w.f);
        ((screw::virtual_work(&m, &w, lambda) - want).abs() / (1.0 + want.abs()), (m, w, lambda))
    });
    r.prop("inv22_brackets", 100, 1e-13, |s| {
        let (x, y) = (s.vec3(), s.vec3());
        (inv22_error(&x, &y), (x, y))
    });
    r.prop("generators", 60, 1e-10, |s| {
        let g = random_generator(s);
        let u = screw::generator_bivector(&g).exp().unwrap();
        let ad = versor::adjoint_matrix(&u, false);
        (prop_err(ad.as_slice(), lift2(&screw::generator_matrix(&g)).unwrap().as_slice()), g)
    });
}

/// Closed form against commutator and (when defined) trivector products.
pub fn algebra_error(a: Algebra, s1: &Screw, s2: &Screw) -> f64 {
    let c = screw::algebra_cross(a, s1, s2).expect("same algebra");
    let d = screw::commutator_cross(a, s1, s2).expect("same algebra");
    let mut e = rel_v33(&c.to_vector33(), &d.to_vector33());
    if let Ok(t) = screw::algebra_trivector(a) {
        let tc = screw::trivector_cross(&t, &s1.to_vector33(), &s2.to_vector33());
        e = e.max(rel_v33(&c.to_vector33(), &tc));
    }
    e
}

pub fn superscrew_error(a: &Mat4, b: &Mat4) -> f64 {
    let (sa, sb) = (Superscrew::from_sl4(a).unwrap(), Superscrew::from_sl4(b).unwrap());
    let want = Superscrew::from_sl4(&(a * b - b * a)).unwrap();
    let flat = |s: &Superscrew| s.0.iter().flat_map(|v| v.iter().copied()).collect::<Vec<_>>();
    rel(&flat(&sa.bracket(&sb)), &flat(&want))
}

pub fn triple_product_error(a: &Screw, b: &Screw, c: &Screw) -> f64 {
    let det = |x: &Vec3, y: &Vec3, z: &Vec3| Mat3::from_columns(&[*x, *y, *z]).determinant();
    let lhs = screw::se3_cross(a, b).unwrap().pairing(c);
    let rhs = det(&a.v, &b.v, &c.t) + det(&b.v, &c.v, &a.t) + det(&c.v, &a.v, &b.t);
    let shifted = screw::se3_cross(b, c).unwrap().pairing(a);
    ((lhs - rhs).abs().max((shifted - lhs).abs())) / (1.0 + rhs.abs())
}

/// A unit-direction se(3) screw `(l, c × l + lambda l)` with `c . l = 0`.
pub fn random_line_screw(s: &mut Sampler) -> Screw {
    let l = s.unit3();
    let c0 = s.vec3() * 2.0;
    let c = c0 - c0.dot(&l) * l;
    Screw::se3(l, c.cross(&l) + s.uniform() * l)
}

pub fn perpendicular_error(a: &Screw, b: &Screw) -> f64 {
    let Ok(p) = screw::common_perpendicular(a, b) else {
        return f64::INFINITY;
    };
    let n = a.v.cross(&b.v);
    let want = Vector33::new(n, p.y.cross(&n) + p.mu * n);
    let got = screw::se3_cross(a, b).unwrap().to_vector33();
    // d is the signed distance between the axes along n
    let (ca, cb) = (a.axis().unwrap().center, b.axis().unwrap().center);
    let d = (cb - ca).dot(&n) / n.norm();
    rel_v33(&got, &want).max((p.d - d).abs() / (1.0 + d.abs()))
}

pub fn inv22_error(x: &Vec3, y: &Vec3) -> f64 {
    use maps::{pp, wp, ww};
    let (p, q) = (screw::inv22_p, screw::inv22_q);
    let c = x.cross(y);
    let pp_want = -(wp(2, 2) + wp(1, 1)) * c[0] + ww(1, 2) * (2.0 * (x[0] * y[1] - x[1] * y[0]))
        + pp(1, 2) * (2.0 * (x[2] * y[0] - x[0] * y[2]));
    let qq_want = (wp(2, 2) - wp(1, 1)) * c[0] + wp(2, 1) * (2.0 * (x[0] * y[1] - x[1] * y[0]))
        + wp(1, 2) * (2.0 * (x[2] * y[0] - x[0] * y[2]));
    let pq = p(x).commutator(&q(y)).max_abs();
    let scale = 1.0 + x.norm() * y.norm();
    (pq / scale)
        .max(rel_mv(&p(x).commutator(&p(y)), &pp_want))
        .max(rel_mv(&q(x).commutator(&q(y)), &qq_want))
}

fn random_generator(s: &mut Sampler) -> screw::Generator {
    use screw::{Generator, ShearFamily};
    match s.index(4) {
        0 => Generator::Perspectivity { x: s.vec3() },
        1 => Generator::Dilation { t: s.vec3() },
        2 => Generator::Isotropic { t: s.uniform() },
        _ => {
            let family: ShearFamily = ShearFamily::ALL[s.index(6)].parse().expect("listed");
            Generator::Shear { family, t: s.vec3() }
        }
    }
}
