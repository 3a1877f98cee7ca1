//! Points and planes as null 3-vectors of Λ³(R^{3,3}), the Plücker
//! transforms of 4x4 matrices, and the way back from 6x6 to 4x4.

use std::fmt;
use std::sync::OnceLock;

use nalgebra::{DMatrix, SMatrix, Vector4};
use serde::{Deserialize, Serialize};

use crate::cl33::{i3, i33, j3, k2, Blade, Multivector, Vector33};
use crate::error::{Error, Result};
use crate::gc4::{CoPlane, HomPoint};
use crate::linalg::{self, j6, t4, t6, Mat4, Mat6};

/// Column order of the Plücker transforms: `e01, e02, e03, e23, e31, e12`,
/// i.e. `E1, E2, E3, E1', E2', E3'`.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2)];

/// Default relative tolerance for classification and recovery.
pub const TOL: f64 = 1e-9;

/// A pure grade-3 multivector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Multivector", into = "Multivector")]
pub struct Trivector33(Multivector);

impl TryFrom<Multivector> for Trivector33 {
    type Error = Error;
    fn try_from(m: Multivector) -> Result<Self> {
        Trivector33::new(m)
    }
}

impl From<Trivector33> for Multivector {
    fn from(t: Trivector33) -> Self {
        t.0
    }
}

impl Trivector33 {
    pub fn new(m: Multivector) -> Result<Self> {
        if m.is_grade(3, 1e-12) {
            Ok(Trivector33(m.grade(3)))
        } else {
            Err(Error::WrongGrade(3))
        }
    }

    pub fn as_multivector(&self) -> &Multivector {
        &self.0
    }

    /// The 20 coefficients in ascending blade order.
    pub fn coords(&self) -> [f64; 20] {
        let mut out = [0.0; 20];
        for (k, b) in Blade::of_grade(3).enumerate() {
            out[k] = self.0.get(b);
        }
        out
    }

    /// Largest coefficient scaled to magnitude 1, first nonzero one positive.
    pub fn normalized(&self) -> Self {
        let m = self.0.max_abs();
        if m == 0.0 {
            return *self;
        }
        let c = self.coords();
        let first = linalg::first_significant(c.iter(), 1e-12).unwrap_or(1.0);
        Trivector33(self.0 * (first.signum() / m))
    }
}

/// Which kind of null 3-space a trivector spans.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Null3Kind {
    Point,
    Plane,
}

/// Point representation
/// `F(X) = E(x) ^ (E(x) . J3) - x0 E(x) ^ K2 + x0^2 I3`.
pub fn rep_point(p: &HomPoint) -> Result<Trivector33> {
    if p.x0 == 0.0 && p.x == linalg::Vec3::zeros() {
        return Err(Error::ZeroInput);
    }
    Ok(Trivector33(point_form(p)))
}

fn point_form(p: &HomPoint) -> Multivector {
    let a = Vector33::new(p.x, linalg::Vec3::zeros()).to_multivector();
    a.wedge(&a.dot(&j3())) - p.x0 * a.wedge(&k2()) + p.x0 * p.x0 * i3()
}

/// Plane representation
/// `F''(P) = E'(n) ^ (E'(n) . I3) + d E'(n) ^ K2 + d^2 J3`.
pub fn rep_plane(p: &CoPlane) -> Result<Trivector33> {
    if p.d == 0.0 && p.n == linalg::Vec3::zeros() {
        return Err(Error::ZeroInput);
    }
    Ok(Trivector33(plane_form(p)))
}

fn plane_form(p: &CoPlane) -> Multivector {
    let a = Vector33::new(linalg::Vec3::zeros(), p.n).to_multivector();
    a.wedge(&a.dot(&i3())) + p.d * a.wedge(&k2()) + p.d * p.d * j3()
}

/// Matrix of `v -> v ^ T` from R^{3,3} to the 15 grade-4 coefficients.
fn wedge_map(t: &Multivector) -> DMatrix<f64> {
    let g4: Vec<Blade> = Blade::of_grade(4).collect();
    let mut m = DMatrix::zeros(g4.len(), 6);
    for i in 0..6 {
        let w = Multivector::basis(Blade::generator(i)).wedge(t);
        for (r, b) in g4.iter().enumerate() {
            m[(r, i)] = w.get(*b);
        }
    }
    m
}

/// Orthonormal basis (columns, Witt coordinates) of `{v : v ^ T = 0}`.
pub fn null_space(t: &Trivector33) -> DMatrix<f64> {
    linalg::null_space(&wedge_map(&t.0), 1e-8)
}

/// Dimension of the intersection of the subspaces annihilated by two trivectors.
pub fn intersection_dim(a: &Trivector33, b: &Trivector33) -> usize {
    let na = null_space(a);
    let nb = null_space(b);
    let mut stacked = DMatrix::zeros(6, na.ncols() + nb.ncols());
    stacked.view_mut((0, 0), (6, na.ncols())).copy_from(&na);
    stacked.view_mut((0, na.ncols()), (6, nb.ncols())).copy_from(&nb);
    na.ncols() + nb.ncols() - linalg::rank(&stacked, 1e-8)
}

/// Point or plane, decided by `T . I33 = T` or `T . I33 = -T`.
pub fn classify_null3(t: &Trivector33) -> Result<Null3Kind> {
    classify_null3_tol(t, TOL)
}

pub fn classify_null3_tol(t: &Trivector33, tol: f64) -> Result<Null3Kind> {
    let m = t.0;
    if m.max_abs() == 0.0 {
        return Err(Error::NotNull3Space);
    }
    let n = null_space(t);
    if n.ncols() != 3 {
        return Err(Error::NotNull3Space);
    }
    let gram = n.transpose() * DMatrix::from_iterator(6, 6, j6().iter().copied()) * &n;
    if gram.amax() > 1e-6 {
        return Err(Error::NotNull3Space);
    }
    let dual = m.dot(&i33());
    let scale = m.max_abs();
    if (dual - m).max_abs() <= tol.max(1e-12) * scale {
        Ok(Null3Kind::Point)
    } else if (dual + m).max_abs() <= tol.max(1e-12) * scale {
        Ok(Null3Kind::Plane)
    } else {
        Err(Error::NotNull3Space)
    }
}

/// Both representations are quadratic forms in four coordinates whose ten
/// monomial patterns have disjoint blade supports, so projecting onto each
/// pattern returns the Gram matrix `s * X X^T` of the represented vector.
struct Quadratic {
    patterns: Vec<Multivector>,
}

impl Quadratic {
    fn new(form: impl Fn(&Vector4<f64>) -> Multivector) -> Self {
        let unit = |i: usize| Vector4::from_fn(|r, _| if r == i { 1.0 } else { 0.0 });
        let patterns: Vec<Multivector> = monomials()
            .map(|(i, j)| {
                if i == j {
                    form(&unit(i))
                } else {
                    form(&(unit(i) + unit(j))) - form(&unit(i)) - form(&unit(j))
                }
            })
            .collect();
        for (a, p) in patterns.iter().enumerate() {
            for q in &patterns[a + 1..] {
                assert!(
                    p.terms().all(|(b, _)| q.get(b) == 0.0),
                    "monomial patterns overlap"
                );
            }
        }
        Quadratic { patterns }
    }

    fn gram(&self, t: &Multivector) -> Mat4 {
        let mut g = Mat4::zeros();
        for (p, (i, j)) in self.patterns.iter().zip(monomials()) {
            let c = t.coeff_dot(p) / p.coeff_dot(p);
            if i == j {
                g[(i, i)] = c;
            } else {
                g[(i, j)] = c;
                g[(j, i)] = c;
            }
        }
        g
    }
}

fn monomials() -> impl Iterator<Item = (usize, usize)> {
    (0..4).flat_map(|i| (i..4).map(move |j| (i, j)))
}

fn point_quadratic() -> &'static Quadratic {
    static Q: OnceLock<Quadratic> = OnceLock::new();
    Q.get_or_init(|| Quadratic::new(|v| point_form(&HomPoint::from_vec4(v))))
}

fn plane_quadratic() -> &'static Quadratic {
    static Q: OnceLock<Quadratic> = OnceLock::new();
    Q.get_or_init(|| Quadratic::new(|v| plane_form(&CoPlane::from_vec4(v))))
}

/// Column of the rank-one Gram matrix with the largest diagonal entry,
/// scaled to the vector itself. `None` when that entry is not positive.
fn rank_one_factor(g: &Mat4) -> Option<Vector4<f64>> {
    let k = (0..4).max_by(|&a, &b| g[(a, a)].total_cmp(&g[(b, b)]))?;
    let d = g[(k, k)];
    if d <= 0.0 {
        return None;
    }
    Some(g.column(k) / d.sqrt())
}

/// Unit Euclidean norm, first significant coordinate positive.
fn normalize4(v: &Vector4<f64>) -> Vector4<f64> {
    let mut u = v.normalize();
    if linalg::first_significant(u.iter(), 1e-12).is_some_and(|s| s < 0.0) {
        u = -u;
    }
    u
}

fn recover_with(
    t: &Trivector33,
    q: &Quadratic,
    form: impl Fn(&Vector4<f64>) -> Multivector,
    tol: f64,
) -> Option<Vector4<f64>> {
    let m = t.0;
    let g = q.gram(&m);
    // the sign of the overall scale is unknown, so either orientation may be positive
    let g = if g.trace() < 0.0 { -g } else { g };
    let v = normalize4(&rank_one_factor(&g)?);
    let back = form(&v);
    let err = linalg::proportional_error(m.coeffs(), back.coeffs());
    (err <= tol.max(1e-10)).then_some(v)
}

/// Homogeneous point represented by `t`, unit norm, first coordinate
/// that is nonzero made positive.
pub fn recover_point(t: &Trivector33) -> Result<HomPoint> {
    recover_point_tol(t, TOL)
}

pub fn recover_point_tol(t: &Trivector33, tol: f64) -> Result<HomPoint> {
    if classify_null3_tol(t, tol) != Ok(Null3Kind::Point) {
        return Err(Error::NotAPoint);
    }
    recover_with(t, point_quadratic(), |v| point_form(&HomPoint::from_vec4(v)), tol)
        .map(|v| HomPoint::from_vec4(&v))
        .ok_or(Error::NotAPoint)
}

/// Plane represented by `t`, normalized like [`recover_point`].
pub fn recover_plane(t: &Trivector33) -> Result<CoPlane> {
    recover_plane_tol(t, TOL)
}

pub fn recover_plane_tol(t: &Trivector33, tol: f64) -> Result<CoPlane> {
    if classify_null3_tol(t, tol) != Ok(Null3Kind::Plane) {
        return Err(Error::NotAPlane);
    }
    recover_with(t, plane_quadratic(), |v| plane_form(&CoPlane::from_vec4(v)), tol)
        .map(|v| CoPlane::from_vec4(&v))
        .ok_or(Error::NotAPlane)
}

fn join_coords(a: &Vector4<f64>, b: &Vector4<f64>) -> [f64; 6] {
    let p = HomPoint::from_vec4(a);
    let q = HomPoint::from_vec4(b);
    let x = p.x0 * q.x - q.x0 * p.x;
    let y = p.x.cross(&q.x);
    [x[0], x[1], x[2], y[0], y[1], y[2]]
}

fn meet_coords(a: &Vector4<f64>, b: &Vector4<f64>) -> [f64; 6] {
    let p = CoPlane::from_vec4(a);
    let q = CoPlane::from_vec4(b);
    let x = p.n.cross(&q.n);
    let y = p.d * q.n - q.d * p.n;
    [x[0], x[1], x[2], y[0], y[1], y[2]]
}

fn pair_matrix(m: &Mat4, f: fn(&Vector4<f64>, &Vector4<f64>) -> [f64; 6]) -> Mat6 {
    let mut out = Mat6::zeros();
    for (c, &(p, q)) in PAIRS.iter().enumerate() {
        let col = f(&m.column(p).into_owned(), &m.column(q).into_owned());
        for r in 0..6 {
            out[(r, c)] = col[r];
        }
    }
    out
}

fn check_invertible(m: &Mat4) -> Result<()> {
    let scale = m.norm().max(f64::MIN_POSITIVE).powi(4);
    if m.determinant().abs() <= 1e-14 * scale {
        Err(Error::Singular)
    } else {
        Ok(())
    }
}

/// Plücker transform: column `e_pq` of the result is `(A e_p) ^ (A e_q)`.
pub fn lift2(a: &Mat4) -> Result<Mat6> {
    check_invertible(a)?;
    Ok(lift2_unchecked(a))
}

/// [`lift2`] without the invertibility check.
pub fn lift2_unchecked(a: &Mat4) -> Mat6 {
    pair_matrix(a, join_coords)
}

/// Dual Plücker transform of a polarity: column `e_pq` is `(D e_p) v (D e_q)`.
pub fn dual_lift2(d: &Mat4) -> Result<Mat6> {
    check_invertible(d)?;
    Ok(pair_matrix(d, meet_coords))
}

/// Extension of a 6x6 matrix to all of Λ(R^{3,3}) by wedging column images.
pub fn outermorphism(b: &Mat6, m: &Multivector) -> Multivector {
    let images: Vec<Multivector> = (0..6)
        .map(|i| Vector33::from_vec6(&b.column(i).into_owned()).to_multivector())
        .collect();
    let mut out = Multivector::zero();
    for (blade, c) in m.terms() {
        let mut acc = Multivector::scalar(c);
        for i in blade.generators() {
            acc = acc.wedge(&images[i]);
        }
        out += acc;
    }
    out
}

/// Induced 20x20 action on grade-3 coefficients (ascending blade order).
pub fn lift3(b: &Mat6) -> SMatrix<f64, 20, 20> {
    let g3: Vec<Blade> = Blade::of_grade(3).collect();
    let mut out = SMatrix::<f64, 20, 20>::zeros();
    for (c, blade) in g3.iter().enumerate() {
        let img = outermorphism(b, &Multivector::basis(*blade));
        for (r, rb) in g3.iter().enumerate() {
            out[(r, c)] = img.get(*rb);
        }
    }
    out
}

/// Apply a 6x6 matrix to a trivector through [`outermorphism`].
pub fn apply3(b: &Mat6, t: &Trivector33) -> Trivector33 {
    Trivector33(outermorphism(b, &t.0))
}

/// Transformation (points to points) or polarity (points to planes).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Transformation,
    Polarity,
}

/// Sign of the determinant of the 4x4 matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DetSign {
    #[serde(rename = "det+1")]
    Plus,
    #[serde(rename = "det-1")]
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub kind: MapKind,
    pub det: DetSign,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            MapKind::Transformation => "transformation",
            MapKind::Polarity => "polarity",
        };
        let d = match self.det {
            DetSign::Plus => "det+1",
            DetSign::Minus => "det-1",
        };
        write!(f, "{k} {d}")
    }
}

/// A 4x4 matrix recovered from a 6x6 regularity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Recovered {
    /// `|det| = 1`, first nonzero entry positive.
    pub matrix: Mat4,
    pub branch: Branch,
}

/// Inverts the Plücker transforms: finds `A` (or a polarity `D`) with
/// `lift2(A)` (or `dual_lift2(D)`) equal to `b` up to a positive scale.
pub fn recover_mat4(b: &Mat6) -> Result<Recovered> {
    recover_mat4_tol(b, TOL)
}

pub fn recover_mat4_tol(b: &Mat6, tol: f64) -> Result<Recovered> {
    let j = j6();
    let g = b.transpose() * j * b;
    let k = (j * g).trace() / 6.0;
    let scale = b.norm_squared().max(f64::MIN_POSITIVE);
    if k.abs() <= 1e-12 * scale || (g - j * k).norm() > tol * scale {
        return Err(Error::NotRegular);
    }
    let bn = b / k.abs().sqrt();
    let orthogonal = k > 0.0;
    let positive = bn.determinant() > 0.0;
    let t = t6();
    let (kind, det, target) = match (orthogonal, positive) {
        (true, true) => (MapKind::Transformation, DetSign::Plus, bn),
        (false, false) => (MapKind::Transformation, DetSign::Minus, bn * t),
        (true, false) => (MapKind::Polarity, DetSign::Plus, j * bn),
        (false, true) => (MapKind::Polarity, DetSign::Minus, j * bn * t),
    };
    let mut a = recover_special(&target, tol)?;
    if det == DetSign::Minus {
        a *= t4();
    }
    let matrix = linalg::normalize_mat4(&a, 1e-12).ok_or(Error::Singular)?;
    Ok(Recovered { matrix, branch: Branch { kind, det } })
}

/// `A` with `det A = 1` and `lift2(A) = c`. Column `j` of `A` is read off
/// the trivector `c F(e_j) = F(A e_j)`, whose coefficients are 3x3 minors
/// of `c`; the relative signs of the columns come from the entries of `c`.
fn recover_special(c: &Mat6, tol: f64) -> Result<Mat4> {
    let q = point_quadratic();
    let mut cols = [Vector4::zeros(); 4];
    for (j, col) in cols.iter_mut().enumerate() {
        let img = outermorphism(c, &point_form(&HomPoint::basis(j)));
        let g = q.gram(&img);
        *col = rank_one_factor(&g).ok_or(Error::BranchUnliftable)?;
    }
    for j in 1..4 {
        let line = join_coords(&cols[0], &cols[j]);
        let s: f64 = (0..6).map(|r| c[(r, j - 1)] * line[r]).sum();
        if s < 0.0 {
            cols[j] = -cols[j];
        }
    }
    let a = Mat4::from_columns(&cols);
    let err = (lift2_unchecked(&a) - c).norm() / c.norm();
    if err > (1e3 * tol).max(1e-8) {
        return Err(Error::BranchUnliftable);
    }
    Ok(a)
}
