//! The group Pin^sp(3,3): products of invertible vectors of R^{3,3},
//! optionally preceded by the formal element `T`, acting on lines by the
//! twisted adjoint `X -> (-1)^r U X U^{-1}`.
//!
//! An element is stored as `T^t U` with `U = Y1 Y2 ... Yr`; the reflections
//! act right to left, so `Yr` is applied first.

use std::fmt;

use nalgebra::{Matrix2, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::cl33::{Multivector, Vector33};
use crate::error::{Error, Result};
use crate::linalg::{self, cross_matrix, t4, t6, Mat3, Mat4, Mat6, Vec3};
use crate::plucker::{Branch, DetSign, MapKind, Recovered};

/// Connected component of the element, with the `T` flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Component {
    /// Odd number of vector factors.
    pub odd: bool,
    /// Odd number of negative-square factors.
    pub negative_odd: bool,
    pub t: bool,
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.t {
            f.write_str("T.")?;
        }
        let sub = if self.negative_odd { 1 } else { 0 };
        let sup = if self.odd { "-" } else { "" };
        write!(f, "Spin{sub}{sup}")
    }
}

/// `T^t Y1 Y2 ... Yr` with every `Yi` invertible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PinSpJson", into = "PinSpJson")]
pub struct PinSpElement {
    tflag: bool,
    factors: Vec<Vector33>,
    expanded: Multivector,
}

#[derive(Serialize, Deserialize)]
struct PinSpJson {
    t: u8,
    factors: Vec<Vector33>,
    #[serde(default, skip_deserializing, skip_serializing_if = "Option::is_none")]
    component: Option<String>,
}

impl TryFrom<PinSpJson> for PinSpElement {
    type Error = Error;
    fn try_from(j: PinSpJson) -> Result<Self> {
        PinSpElement::new(j.t % 2 == 1, j.factors)
    }
}

impl From<PinSpElement> for PinSpJson {
    fn from(u: PinSpElement) -> Self {
        PinSpJson {
            t: u.tflag as u8,
            component: Some(u.component().to_string()),
            factors: u.factors,
        }
    }
}

/// Relative threshold below which a vector counts as null.
const INVERTIBLE_TOL: f64 = 1e-12;

impl PinSpElement {
    pub fn new(tflag: bool, factors: Vec<Vector33>) -> Result<Self> {
        if let Some(k) = factors.iter().position(|f| !f.is_invertible(INVERTIBLE_TOL)) {
            return Err(Error::NotInvertible(k));
        }
        let expanded = factors
            .iter()
            .fold(Multivector::scalar(1.0), |acc, f| acc.gp(&f.to_multivector()));
        Ok(PinSpElement { tflag, factors, expanded })
    }

    pub fn from_factors(factors: Vec<Vector33>) -> Result<Self> {
        PinSpElement::new(false, factors)
    }

    pub fn identity() -> Self {
        PinSpElement::new(false, Vec::new()).expect("empty product")
    }

    /// The formal element `T`.
    pub fn t() -> Self {
        PinSpElement::new(true, Vec::new()).expect("empty product")
    }

    /// `-1 = f (-f)` for the unit vector `f = (E1 + E1') / sqrt 2`.
    pub fn minus_one() -> Self {
        let f = diagonal_vector(0, true);
        PinSpElement::from_factors(vec![f, -f]).expect("unit factors")
    }

    /// `I33` as the product `f1 g1 f2 g2 f3 g3` of the orthonormal vectors
    /// `fi = (Ei + Ei') / sqrt 2`, `gi = (Ei - Ei') / sqrt 2`.
    pub fn pseudoscalar() -> Self {
        let factors = (0..3)
            .flat_map(|i| [diagonal_vector(i, true), diagonal_vector(i, false)])
            .collect();
        PinSpElement::from_factors(factors).expect("unit factors")
    }

    pub fn tflag(&self) -> bool {
        self.tflag
    }

    pub fn factors(&self) -> &[Vector33] {
        &self.factors
    }

    /// Clifford product of the factors (without `T`).
    pub fn expanded(&self) -> &Multivector {
        &self.expanded
    }

    pub fn component(&self) -> Component {
        Component {
            odd: self.factors.len() % 2 == 1,
            negative_odd: self.factors.iter().filter(|f| f.square() < 0.0).count() % 2 == 1,
            t: self.tflag,
        }
    }

    /// 6x6 matrix of the adjoint action on R^{3,3}.
    pub fn mat6(&self) -> Mat6 {
        let m = adjoint_matrix(&self.expanded, self.factors.len() % 2 == 1);
        if self.tflag {
            t6() * m
        } else {
            m
        }
    }

    /// Adjoint action on a vector.
    pub fn adjoint(&self, x: &Vector33) -> Vector33 {
        Vector33::from_vec6(&(self.mat6() * x.to_vec6()))
    }

    /// Adjoint action extended to multivectors as an outermorphism.
    pub fn adjoint_multivector(&self, m: &Multivector) -> Multivector {
        crate::plucker::outermorphism(&self.mat6(), m)
    }

    /// `U^T`: every factor replaced by its T-image.
    pub fn t_conj(&self) -> Self {
        self.map_factors(|f| f.t_image())
    }

    /// `U^J`: every factor replaced by its J-image.
    pub fn j_conj(&self) -> Self {
        self.map_factors(|f| f.j_image())
    }

    fn map_factors(&self, f: impl Fn(&Vector33) -> Vector33) -> Self {
        PinSpElement::new(self.tflag, self.factors.iter().map(f).collect())
            .expect("images of invertible vectors are invertible")
    }

    /// `self o other`, with the flag moved left through `T U = U^T T`.
    pub fn compose(&self, other: &PinSpElement) -> Self {
        let left = if other.tflag { self.t_conj() } else { self.clone() };
        let mut factors = left.factors;
        factors.extend_from_slice(&other.factors);
        PinSpElement::new(self.tflag ^ other.tflag, factors).expect("invertible factors")
    }

    /// The induced 4x4 matrix, evaluated as a chain of the bilinear forms
    /// `L(x, y) = -(0 -x^T; x y×)` with every odd factor (counted from the
    /// right) replaced by its J-image. Scaled to `|det| = 1`, first nonzero
    /// entry positive.
    pub fn to_mat4(&self) -> Recovered {
        let r = self.factors.len();
        let matrix = linalg::normalize_mat4(&self.chain_matrix(), 1e-12).expect("versor matrices are invertible");
        let kind = if r % 2 == 1 { MapKind::Polarity } else { MapKind::Transformation };
        let det = if matrix.determinant() > 0.0 { DetSign::Plus } else { DetSign::Minus };
        Recovered { matrix, branch: Branch { kind, det } }
    }

    /// The unnormalized chain product behind [`PinSpElement::to_mat4`].
    pub fn chain_matrix(&self) -> Mat4 {
        let r = self.factors.len();
        let mut m = Mat4::identity();
        for (idx, f) in self.factors.iter().enumerate() {
            let w = if (r - idx) % 2 == 1 { f.j_image() } else { *f };
            m *= bilinear_form(&w);
        }
        if self.tflag {
            t4() * m
        } else {
            m
        }
    }
}

/// `X -> eps U X U~ / (U U~)` with `eps = -1` for odd `U`, as a 6x6
/// matrix; `U` is any versor given in expanded form.
pub fn adjoint_matrix(u: &Multivector, odd: bool) -> Mat6 {
    let ur = u.reverse();
    let norm = u.gp(&ur).scalar_part();
    let eps = if odd { -1.0 } else { 1.0 };
    let mut m = Mat6::zeros();
    for i in 0..6 {
        let mut e = nalgebra::Vector6::zeros();
        e[i] = 1.0;
        let x = Vector33::from_vec6(&e).to_multivector();
        let img = u.gp(&x).gp(&ur) * (eps / norm);
        let v = Vector33::from_multivector(&img.grade(1), 1.0).expect("grade-1 part").to_vec6();
        m.set_column(i, &v);
    }
    m
}

fn diagonal_vector(i: usize, positive: bool) -> Vector33 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut x = Vec3::zeros();
    x[i] = s;
    Vector33::new(x, if positive { x } else { -x })
}

/// `L(x, y) = -(0  -x^T; x  y×)`.
pub fn bilinear_form(v: &Vector33) -> Mat4 {
    -linalg::blocks4(0.0, &-v.x, &v.x, &cross_matrix(&v.y))
}

/// Rotation by `pi` about the line through `y` with direction `x`, as the
/// two reflections `(x, lambda x + y × x)` and `(x, -lambda x + y × x)`.
pub fn make_pi_rotation(x: &Vec3, y: &Vec3, lambda: f64) -> Result<PinSpElement> {
    if x.norm() == 0.0 || x.dot(y).abs() > 1e-9 * x.norm() * y.norm().max(1.0) {
        return Err(Error::BadAxis);
    }
    if lambda == 0.0 {
        return Err(Error::DegenerateInput("lambda must be nonzero"));
    }
    let m = y.cross(x);
    PinSpElement::from_factors(vec![
        Vector33::new(*x, lambda * x + m),
        Vector33::new(*x, -lambda * x + m),
    ])
}

/// `x -> R x + t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MotionJson", into = "MotionJson")]
pub struct RigidMotion {
    pub r: Mat3,
    pub t: Vec3,
}

#[derive(Serialize, Deserialize)]
struct MotionJson {
    #[serde(rename = "R")]
    r: [[f64; 3]; 3],
    t: [f64; 3],
}

impl TryFrom<MotionJson> for RigidMotion {
    type Error = Error;
    fn try_from(j: MotionJson) -> Result<Self> {
        let r = Mat3::from_fn(|i, k| j.r[i][k]);
        RigidMotion::new(r, j.t.into())
    }
}

impl From<RigidMotion> for MotionJson {
    fn from(m: RigidMotion) -> Self {
        MotionJson {
            r: std::array::from_fn(|i| std::array::from_fn(|k| m.r[(i, k)])),
            t: m.t.into(),
        }
    }
}

/// Rotation by `angle` about the unit direction `axis` through the origin.
pub fn rotation(axis: &Vec3, angle: f64) -> Mat3 {
    let k = cross_matrix(&axis.normalize());
    Mat3::identity() + k * angle.sin() + k * k * (1.0 - angle.cos())
}

/// Below this `|sin(theta/2)|` a motion is treated as a pure translation.
const SMALL_HALF_ANGLE: f64 = 1e-8;

impl RigidMotion {
    pub fn new(r: Mat3, t: Vec3) -> Result<Self> {
        if (r.transpose() * r - Mat3::identity()).norm() > 1e-9 || r.determinant() <= 0.0 {
            return Err(Error::NotARotation);
        }
        Ok(RigidMotion { r, t })
    }

    pub fn translation(t: Vec3) -> Self {
        RigidMotion { r: Mat3::identity(), t }
    }

    /// Screw motion: rotate by `angle` about the line with direction `axis`
    /// through `point`, then slide `distance` along the axis.
    pub fn screw(axis: &Vec3, point: &Vec3, angle: f64, distance: f64) -> Self {
        let v = axis.normalize();
        let r = rotation(&v, angle);
        RigidMotion { r, t: (Mat3::identity() - r) * point + distance * v }
    }

    /// Unit axis and angle in `(0, pi]`; `None` for pure translations.
    pub fn axis_angle(&self) -> Option<(Vec3, f64)> {
        let r = &self.r;
        let w = Vec3::new(r[(2, 1)] - r[(1, 2)], r[(0, 2)] - r[(2, 0)], r[(1, 0)] - r[(0, 1)]);
        let theta = (w.norm() / 2.0).atan2((r.trace() - 1.0) / 2.0);
        if (theta / 2.0).sin().abs() < SMALL_HALF_ANGLE {
            return None;
        }
        let v = if w.norm() > 1e-6 {
            w.normalize()
        } else {
            // near pi the symmetric part R + I = 2 v v^T carries the axis
            let s = r + Mat3::identity();
            let k = (0..3)
                .max_by(|&a, &b| s.column(a).norm().total_cmp(&s.column(b).norm()))
                .expect("three columns");
            s.column(k).normalize()
        };
        Some((v, theta))
    }

    /// Signed translation along the axis, `t . v`.
    pub fn drive(&self) -> f64 {
        self.axis_angle().map_or(self.t.norm(), |(v, _)| self.t.dot(&v))
    }

    /// Foot of the perpendicular from the origin to the screw axis:
    /// `c = R_{(pi - theta)/2} (t - (t.v) v) / (2 sin(theta/2))`.
    pub fn center(&self) -> Option<Vec3> {
        let (v, theta) = self.axis_angle()?;
        let tp = self.t - self.t.dot(&v) * v;
        Some(rotation(&v, (std::f64::consts::PI - theta) / 2.0) * tp / (2.0 * (theta / 2.0).sin()))
    }

    /// `(1 0; t R)`.
    pub fn to_mat4(&self) -> Mat4 {
        linalg::blocks4(1.0, &Vec3::zeros(), &self.t, &self.r)
    }

    /// `self o other`.
    pub fn compose(&self, other: &RigidMotion) -> RigidMotion {
        RigidMotion { r: self.r * other.r, t: self.r * other.t + self.t }
    }
}

/// Unit vector orthogonal to `v` (any direction if `v = 0`).
pub fn perpendicular(v: &Vec3) -> Vec3 {
    if v.norm() == 0.0 {
        return Vec3::x();
    }
    let u = v.normalize();
    let a = if u[1].abs() < 0.9 { Vec3::y() } else { Vec3::z() };
    (a - a.dot(&u) * u).normalize()
}

/// Which pair of moments splits the driving distance between the two
/// reflection pairs of a rigid motion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RigidForm {
    /// `m1 = (c + d v / 2) × w1`, `m2 = c × v1`.
    #[default]
    Fact1,
    /// `m1 = c × w1`, `m2 = (c - d v / 2) × v1`.
    Fact2,
}

/// Four reflections `(w1, -w1 + m1)(w1, w1 + m1)(v1, -v1 + m2)(v1, v1 + m2)`
/// inducing `M`, where `v1` is orthogonal to the axis `v` (chosen
/// automatically unless given), `v2 = v × v1` and
/// `w1 = cos(theta/2) v1 + sin(theta/2) v2`. Pure translations use
/// [`TranslationForm::Opt2`].
pub fn make_rigid_versor(m: &RigidMotion, form: RigidForm, v1: Option<Vec3>) -> Result<PinSpElement> {
    let Some((v, theta)) = m.axis_angle() else {
        return make_translation(&m.t, TranslationForm::Opt2);
    };
    let v1 = match v1 {
        None => perpendicular(&v),
        Some(a) if a.norm() > 0.0 && a.dot(&v).abs() <= 1e-9 * a.norm() => a.normalize(),
        Some(_) => return Err(Error::BadAxis),
    };
    let v2 = v.cross(&v1);
    let w1 = (theta / 2.0).cos() * v1 + (theta / 2.0).sin() * v2;
    let c = m.center().expect("rotation part present");
    let d = m.t.dot(&v);
    let (m1, m2) = match form {
        RigidForm::Fact1 => ((c + d / 2.0 * v).cross(&w1), c.cross(&v1)),
        RigidForm::Fact2 => (c.cross(&w1), (c - d / 2.0 * v).cross(&v1)),
    };
    PinSpElement::from_factors(vec![
        Vector33::new(w1, -w1 + m1),
        Vector33::new(w1, w1 + m1),
        Vector33::new(v1, -v1 + m2),
        Vector33::new(v1, v1 + m2),
    ])
}

/// The two coordinate-free reflection quadruples for translations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TranslationForm {
    /// `(x, x - y + x×y/y²)(x, x + x×y/y²)(x, x + y)(x, x)`, which translates
    /// by `x / |x|²`; built with `x = t / |t|²`.
    Opt1,
    /// `(y, -y + x×y/2)(y, y + x×y/2)(y, -y)(y, y)` with `x = t`.
    Opt2,
}

/// Translation by `t`; the auxiliary vector `y` is a unit vector
/// orthogonal to `t` (its negative for [`TranslationForm::Opt1`], which
/// makes `t = e1` produce the factors with integer coordinates).
pub fn make_translation(t: &Vec3, form: TranslationForm) -> Result<PinSpElement> {
    let y = perpendicular(t);
    let factors = match form {
        TranslationForm::Opt1 => {
            if t.norm() == 0.0 {
                return Ok(PinSpElement::identity());
            }
            let x = t / t.norm_squared();
            let y = -y;
            let s = x.cross(&y) / y.norm_squared();
            vec![
                Vector33::new(x, x - y + s),
                Vector33::new(x, x + s),
                Vector33::new(x, x + y),
                Vector33::new(x, x),
            ]
        }
        TranslationForm::Opt2 => {
            let s = t.cross(&y) / 2.0;
            vec![
                Vector33::new(y, -y + s),
                Vector33::new(y, y + s),
                Vector33::new(y, -y),
                Vector33::new(y, y),
            ]
        }
    };
    PinSpElement::from_factors(factors)
}

/// Reflection in the plane `{p : d + n . p = 0}`,
/// `T (v2, -v2 - d v1)(v2, v2 - d v1)(v1, -v1)(v1, v1)` with `v1` a unit
/// vector orthogonal to `n` and `v2 = n × v1`; `T (n, -n)(n, n)` when `d = 0`.
pub fn make_plane_reflection(n: &Vec3, d: f64) -> Result<PinSpElement> {
    if (n.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::BadNormal);
    }
    let factors = if d == 0.0 {
        vec![Vector33::new(*n, -n), Vector33::new(*n, *n)]
    } else {
        let v1 = perpendicular(n);
        let v2 = n.cross(&v1);
        vec![
            Vector33::new(v2, -v2 - d * v1),
            Vector33::new(v2, v2 - d * v1),
            Vector33::new(v1, -v1),
            Vector33::new(v1, v1),
        ]
    };
    PinSpElement::new(true, factors)
}

/// The six conjugacy classes of products of two reflections.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormalFamily {
    /// Span of signature (2,0,0): `(c -s; s c) + (c -s; s c)`.
    EllipticPositive,
    /// Signature (0,2,0): `(c s; -s c) + (c -s; s c)`.
    EllipticNegative,
    /// Signature (1,0,1): `(1 -l; 0 1) + (1 0; l 1)`.
    ParabolicPositive,
    /// Signature (0,1,1): `(1 l; 0 1) + (1 0; l 1)`.
    ParabolicNegative,
    /// Signature (1,1,0), factors of equal sign: `diag(1/l, 1/l, l, l)`.
    HyperbolicEven,
    /// Signature (1,1,0), factors of opposite sign: `diag(1/l, 1/l, -l, -l)`.
    HyperbolicOdd,
}

impl NormalFamily {
    /// Position in the list of normal forms, 1 to 6.
    pub fn number(self) -> usize {
        self as usize + 1
    }
}

/// A normal form with its parameter: `theta` for the elliptic families,
/// `lambda` otherwise (`lambda = 1` for the parabolic ones, where all
/// nonzero values are conjugate).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalForm {
    pub family: NormalFamily,
    pub parameter: f64,
}

impl NormalForm {
    pub fn matrix(&self) -> Mat4 {
        let p = self.parameter;
        let (c, s) = (p.cos(), p.sin());
        match self.family {
            NormalFamily::EllipticPositive => {
                Mat4::new(c, -s, 0., 0., s, c, 0., 0., 0., 0., c, -s, 0., 0., s, c)
            }
            NormalFamily::EllipticNegative => {
                Mat4::new(c, s, 0., 0., -s, c, 0., 0., 0., 0., c, -s, 0., 0., s, c)
            }
            NormalFamily::ParabolicPositive => {
                Mat4::new(1., -p, 0., 0., 0., 1., 0., 0., 0., 0., 1., 0., 0., 0., p, 1.)
            }
            NormalFamily::ParabolicNegative => {
                Mat4::new(1., p, 0., 0., 0., 1., 0., 0., 0., 0., 1., 0., 0., 0., p, 1.)
            }
            NormalFamily::HyperbolicEven => {
                Mat4::from_diagonal(&nalgebra::Vector4::new(1. / p, 1. / p, p, p))
            }
            NormalFamily::HyperbolicOdd => {
                Mat4::from_diagonal(&nalgebra::Vector4::new(1. / p, 1. / p, -p, -p))
            }
        }
    }
}

/// Classifies `Ad_{UV}` by the signature of the plane spanned by `U, V`.
pub fn two_reflection_normal_form(u: &Vector33, v: &Vector33) -> Result<NormalForm> {
    for (k, f) in [u, v].iter().enumerate() {
        if !f.is_invertible(INVERTIBLE_TOL) {
            return Err(Error::NotInvertible(k));
        }
    }
    let (eu, ev) = (u.to_vec6(), v.to_vec6());
    let wedge = eu.norm_squared() * ev.norm_squared() - eu.dot(&ev).powi(2);
    if wedge <= 1e-12 * eu.norm_squared() * ev.norm_squared() {
        return Err(Error::Degenerate);
    }
    // Gram matrix of an orthonormal (Euclidean) basis of the span
    let b1 = eu.normalize();
    let b2 = (ev - ev.dot(&b1) * b1).normalize();
    let (p1, p2) = (Vector33::from_vec6(&b1), Vector33::from_vec6(&b2));
    let g = Matrix2::new(p1.square(), p1.dot(&p2), p1.dot(&p2), p2.square());
    let eig = SymmetricEigen::new(g).eigenvalues;
    let snap = 1e-9 * g.norm();
    let pos = eig.iter().filter(|&&l| l > snap).count();
    let neg = eig.iter().filter(|&&l| l < -snap).count();

    let uu = u.square();
    let vv = v.square();
    let cos = u.dot(v) / (uu.abs() * vv.abs()).sqrt();
    let (family, parameter) = match (pos, neg) {
        (2, 0) => (NormalFamily::EllipticPositive, cos.clamp(-1.0, 1.0).acos()),
        (0, 2) => (NormalFamily::EllipticNegative, (-cos).clamp(-1.0, 1.0).acos()),
        (1, 0) => (NormalFamily::ParabolicPositive, 1.0),
        (0, 1) => (NormalFamily::ParabolicNegative, 1.0),
        (1, 1) => {
            let a = cos.abs();
            let even = uu * vv > 0.0;
            let b = if even { (a * a - 1.0).max(0.0).sqrt() } else { (a * a + 1.0).sqrt() };
            let fam = if even { NormalFamily::HyperbolicEven } else { NormalFamily::HyperbolicOdd };
            (fam, ((a - b).abs() / (a + b)).sqrt())
        }
        _ => return Err(Error::Degenerate),
    };
    Ok(NormalForm { family, parameter })
}

/// Result of [`try_compress`].
#[derive(Clone, Debug, PartialEq)]
pub enum Compression {
    Compressed(Box<PinSpElement>),
    Incompressible,
}

/// Rewrites a product of four reflections as a product of two when
/// `<U>_4 = 0` and `<U>_2 = a ^ b` has an invertible factor `b`:
/// `U = (a' + <U>_0 b^{-1}) b` with `a' = (<U>_2 ⌊ b) / b²`.
pub fn try_compress(u: &PinSpElement) -> Compression {
    let m = *u.expanded();
    let scale = m.max_abs();
    let s = m.scalar_part();
    let b2 = m.grade(2);
    if m.grade(4).max_abs() > 1e-9 * scale {
        return Compression::Incompressible;
    }
    let factors = if b2.max_abs() <= 1e-12 * scale {
        let f = Vector33::new(Vec3::x(), Vec3::x());
        if s == 0.0 {
            return Compression::Incompressible;
        }
        vec![f * (s / f.square()), f]
    } else {
        match split_bivector(&b2, s) {
            Some(f) => f,
            None => return Compression::Incompressible,
        }
    };
    match PinSpElement::new(u.tflag(), factors) {
        Ok(c) if c.expanded().approx_eq(&m, 1e-9) => Compression::Compressed(Box::new(c)),
        _ => Compression::Incompressible,
    }
}

fn split_bivector(b: &Multivector, s: f64) -> Option<Vec<Vector33>> {
    if b.wedge(b).max_abs() > 1e-9 * b.max_abs().powi(2) {
        return None;
    }
    // the plane of b is the image of v -> v ⌋ b
    let mut m = nalgebra::DMatrix::zeros(6, 6);
    for i in 0..6 {
        let mut e = nalgebra::Vector6::zeros();
        e[i] = 1.0;
        let img = Vector33::from_vec6(&e).to_multivector().left_contraction(b);
        let v = Vector33::from_multivector(&img, 1.0).ok()?.to_vec6();
        for r in 0..6 {
            m[(r, i)] = v[r];
        }
    }
    let svd = m.svd(true, false);
    let uu = svd.u?;
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&a, &c| svd.singular_values[c].total_cmp(&svd.singular_values[a]));
    let p = Vector33::from_vec6(&nalgebra::Vector6::from_iterator(uu.column(order[0]).iter().copied()));
    let q = Vector33::from_vec6(&nalgebra::Vector6::from_iterator(uu.column(order[1]).iter().copied()));
    let g = Matrix2::new(p.square(), p.dot(&q), p.dot(&q), q.square());
    let eig = SymmetricEigen::new(g);
    let k = if eig.eigenvalues[0].abs() >= eig.eigenvalues[1].abs() { 0 } else { 1 };
    if eig.eigenvalues[k].abs() <= 1e-9 * g.norm().max(f64::MIN_POSITIVE) {
        return None;
    }
    let w = eig.eigenvectors.column(k);
    let bv = p * w[0] + q * w[1];
    let bb = bv.square();
    let a = Vector33::from_multivector(&b.right_contraction(&bv.to_multivector()), 1.0).ok()? * (1.0 / bb);
    Some(vec![a + bv * (s / bb), bv])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plucker::{dual_lift2, lift2};

    fn v33(x: [f64; 3], y: [f64; 3]) -> Vector33 {
        Vector33::new(x.into(), y.into())
    }

    fn close(a: &Mat4, b: &Mat4) -> bool {
        linalg::proportional_error(a.as_slice(), b.as_slice()) < 1e-12
    }

    #[test]
    fn single_reflection_is_a_polarity() {
        let u = PinSpElement::from_factors(vec![v33([1., 0., 0.], [1., 0., 0.])]).unwrap();
        let r = u.to_mat4();
        assert_eq!(r.branch.kind, MapKind::Polarity);
        let e1 = Vec3::x();
        let want = linalg::blocks4(0.0, &-e1, &e1, &cross_matrix(&e1));
        assert!(close(&r.matrix, &want));
        let m6 = u.mat6();
        assert!(linalg::proportional_error(m6.as_slice(), dual_lift2(&want).unwrap().as_slice()) < 1e-12);
        let x = v33([1., 0., 0.], [1., 0., 0.]);
        assert!((u.adjoint(&x).to_vec6() + x.to_vec6()).norm() < 1e-15);
    }

    #[test]
    fn conjugations() {
        let f = v33([1., 2., 3.], [0.5, -1., 2.]);
        let u = PinSpElement::from_factors(vec![f]).unwrap();
        assert_eq!(u.t_conj().factors()[0], v33([-1., -2., -3.], [0.5, -1., 2.]));
        assert_eq!(u.j_conj().factors()[0], v33([0.5, -1., 2.], [1., 2., 3.]));
    }

    #[test]
    fn flag_algebra() {
        let t = PinSpElement::t();
        let tt = t.compose(&t);
        assert!(!tt.tflag() && tt.factors().is_empty());
        let f = v33([1., 2., 3.], [0.5, -1., 2.]);
        let u = PinSpElement::from_factors(vec![f]).unwrap();
        let a = u.compose(&t);
        assert!(a.tflag());
        assert_eq!(a.factors()[0], f.t_image());
        let b = t.compose(&u);
        assert_eq!(b.factors()[0], f);
    }

    #[test]
    fn pi_rotations() {
        let r = make_pi_rotation(&Vec3::x(), &Vec3::zeros(), 1.0).unwrap().to_mat4();
        assert!(close(&r.matrix, &Mat4::from_diagonal(&nalgebra::Vector4::new(1., 1., -1., -1.))));
        let a = make_pi_rotation(&Vec3::x(), &Vec3::z(), 1.0).unwrap().to_mat4().matrix;
        let b = make_pi_rotation(&Vec3::x(), &Vec3::z(), 5.0).unwrap().to_mat4().matrix;
        let want = Mat4::new(1., 0., 0., 0., 0., 1., 0., 0., 0., 0., -1., 0., 2., 0., 0., -1.);
        assert!(close(&a, &want) && close(&b, &want));
        assert_eq!(make_pi_rotation(&Vec3::x(), &Vec3::x(), 1.0).unwrap_err(), Error::BadAxis);
    }

    #[test]
    fn quarter_turn_factors() {
        let m = RigidMotion::new(rotation(&Vec3::z(), std::f64::consts::FRAC_PI_2), Vec3::zeros()).unwrap();
        let x2 = Vec3::new(1., -1., 0.) / 2f64.sqrt();
        let u = make_rigid_versor(&m, RigidForm::Fact1, Some(x2)).unwrap();
        let f = u.factors();
        assert!((f[0].x - Vec3::x()).norm() < 1e-15 && (f[2].x - x2).norm() < 1e-15);
        assert!(close(&u.to_mat4().matrix, &m.to_mat4()));
    }

    #[test]
    fn translation_opt1_on_e1() {
        let u = make_translation(&Vec3::x(), TranslationForm::Opt1).unwrap();
        let f = u.factors();
        assert_eq!(f[0], v33([1., 0., 0.], [1., 1., -1.]));
        assert_eq!(f[1], v33([1., 0., 0.], [1., 0., -1.]));
        assert_eq!(f[2], v33([1., 0., 0.], [1., -1., 0.]));
        assert_eq!(f[3], v33([1., 0., 0.], [1., 0., 0.]));
        assert!(close(&u.to_mat4().matrix, &RigidMotion::translation(Vec3::x()).to_mat4()));
    }

    #[test]
    fn plane_reflections() {
        let u = make_plane_reflection(&Vec3::z(), 0.0).unwrap();
        assert_eq!(u.factors().len(), 2);
        let want = Mat4::from_diagonal(&nalgebra::Vector4::new(1., 1., 1., -1.));
        assert!(close(&u.to_mat4().matrix, &want));
        let u = make_plane_reflection(&Vec3::x(), 1.0).unwrap();
        let want = Mat4::new(1., 0., 0., 0., -2., -1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 1.);
        assert!(close(&u.to_mat4().matrix, &want));
        let uu = u.compose(&u).to_mat4().matrix;
        assert!(close(&uu, &Mat4::identity()));
        assert_eq!(make_plane_reflection(&Vec3::new(1., 1., 0.), 0.0).unwrap_err(), Error::BadNormal);
    }

    #[test]
    fn hyperbolic_example() {
        let (a, b) = (2.0, 0.5);
        let u = v33([a + b, 0., 0.], [a - b, 0., 0.]);
        let v = v33([1., 0., 0.], [1., 0., 0.]);
        let m = PinSpElement::from_factors(vec![u, v]).unwrap().to_mat4().matrix;
        let want = Mat4::from_diagonal(&nalgebra::Vector4::new(a + b, a + b, a - b, a - b));
        assert!(close(&m, &want));
    }

    #[test]
    fn compression_of_scalar_and_ratio_products() {
        let f = v33([1., 0., 0.], [1., 0., 0.]);
        let g = v33([1., 0., 0.], [-1., 0., 0.]);
        let u = PinSpElement::from_factors(vec![f, g, g, f]).unwrap();
        assert!(matches!(try_compress(&u), Compression::Compressed(c) if c.factors().len() == 2));
        let x = Vec3::new(1., 2., -1.);
        let r = |l: f64| Vector33::new(x, l * x);
        let u = PinSpElement::from_factors(vec![r(1.0), r(3.0), r(-2.0), r(0.5)]).unwrap();
        match try_compress(&u) {
            Compression::Compressed(c) => assert!(c.expanded().approx_eq(u.expanded(), 1e-12)),
            Compression::Incompressible => panic!("should compress"),
        }
    }

    #[test]
    fn lift_of_rigid_motion_matches() {
        let m = RigidMotion::screw(&Vec3::new(1., 2., 2.), &Vec3::new(0., 1., -1.), 1.2, 0.4);
        let u = make_rigid_versor(&m, RigidForm::Fact2, None).unwrap();
        let b = lift2(&m.to_mat4()).unwrap();
        assert!(linalg::proportional_error(u.mat6().as_slice(), b.as_slice()) < 1e-12);
    }
}
