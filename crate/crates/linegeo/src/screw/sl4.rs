//! sl(4) as bivectors of R^{3,3}: the isomorphism with so(3,3), the
//! superscrew coordinates and the generators of special projective maps.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use nalgebra::{SMatrix, SVector};
use serde::{Deserialize, Serialize};

use super::maps::{self, bivector_coords, wp};
use super::{hadamard, star};
use crate::cl33::{k2, Multivector};
use crate::error::{Error, Result};
use crate::linalg::{blocks6, cross_matrix, Mat3, Mat4, Mat6, Vec3};

fn split(m: &Mat4) -> (Vec3, Vec3, Mat3) {
    let m0 = Vec3::new(m[(1, 0)], m[(2, 0)], m[(3, 0)]);
    let n0 = Vec3::new(m[(0, 1)], m[(0, 2)], m[(0, 3)]);
    (m0, n0, m.fixed_view::<3, 3>(1, 1).into_owned())
}

fn require_traceless(m: &Mat4) -> Result<()> {
    if m.trace().abs() > 1e-10 * m.norm().max(1.0) {
        return Err(Error::NotTraceless);
    }
    Ok(())
}

/// `(-tr N + N   -n0×; m0×   tr N - N^T)` for `M = (* n0^T; m0 N)`.
pub fn sl4_to_mat6(m: &Mat4) -> Result<Mat6> {
    require_traceless(m)?;
    let (m0, n0, n) = split(m);
    let tr = n.trace();
    Ok(blocks6(
        &(n - Mat3::identity() * tr),
        &-cross_matrix(&n0),
        &cross_matrix(&m0),
        &(Mat3::identity() * tr - n.transpose()),
    ))
}

/// `1/2 {-E'E'(m0) + E E(n0) - E=E'(n1) + E<E'(n2) + E>E'(n3)}` with `n1`
/// the diagonal of `N`, `n2 = (N23, N31, N12)` and `n3 = (N32, N13, N21)`.
pub fn sl4_to_bivector(m: &Mat4) -> Result<Multivector> {
    require_traceless(m)?;
    let (m0, n0, n) = split(m);
    let n1 = n.diagonal();
    let n2 = Vec3::new(n[(1, 2)], n[(2, 0)], n[(0, 1)]);
    let n3 = Vec3::new(n[(2, 1)], n[(0, 2)], n[(1, 0)]);
    Ok((-maps::epep(&m0) + maps::ee(&n0) - maps::e_eq_ep(&n1) + maps::e_lt_ep(&n2) + maps::e_gt_ep(&n3)) * 0.5)
}

/// Inverse of [`sl4_to_bivector`] on the grade-2 part.
pub fn bivector_to_sl4(b: &Multivector) -> Result<Mat4> {
    if !b.is_grade(2, 1e-12) {
        return Err(Error::WrongGrade(2));
    }
    let mut n = Mat3::zeros();
    let mut m0 = Vec3::zeros();
    let mut n0 = Vec3::zeros();
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        m0[i] = -2.0 * coefficient(b, &maps::pp(j, k));
        n0[i] = 2.0 * coefficient(b, &maps::ww(j, k));
        for a in 0..3 {
            if a != i {
                n[(i, a)] = 2.0 * coefficient(b, &wp(i, a));
            }
        }
    }
    // E_ii' carries -(s - n_ii)/2 where s = tr N
    let c: Vec3 = Vec3::from_fn(|i, _| coefficient(b, &wp(i, i)));
    let s = -c.sum();
    for i in 0..3 {
        n[(i, i)] = s + 2.0 * c[i];
    }
    let mut m = Mat4::zeros();
    m[(0, 0)] = -s;
    for i in 0..3 {
        m[(i + 1, 0)] = m0[i];
        m[(0, i + 1)] = n0[i];
    }
    m.fixed_view_mut::<3, 3>(1, 1).copy_from(&n);
    Ok(m)
}

/// Coefficient of the basis blade `e` (given with its sign) in `b`.
fn coefficient(b: &Multivector, e: &Multivector) -> f64 {
    let (blade, sign) = e.terms().next().expect("nonzero blade");
    b.get(blade) / sign
}

/// Five 3-vectors, the coefficients of
/// `E E(x1) + E'E'(x2) + E=E'_3(x3) + (E>E' + E<E')(x4) + (E>E' - E<E')(x5)`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[[f64; 3]; 5]", into = "[[f64; 3]; 5]")]
pub struct Superscrew(pub [Vec3; 5]);

impl From<[[f64; 3]; 5]> for Superscrew {
    fn from(a: [[f64; 3]; 5]) -> Self {
        Superscrew(a.map(Vec3::from))
    }
}

impl From<Superscrew> for [[f64; 3]; 5] {
    fn from(s: Superscrew) -> Self {
        s.0.map(Into::into)
    }
}

fn superscrew_inverse() -> &'static SMatrix<f64, 15, 15> {
    static INV: OnceLock<SMatrix<f64, 15, 15>> = OnceLock::new();
    INV.get_or_init(|| {
        let mut m = SMatrix::<f64, 15, 15>::zeros();
        for k in 0..15 {
            let mut s = Superscrew::default();
            s.0[k / 3][k % 3] = 1.0;
            m.set_column(k, &bivector_coords(&s.to_bivector()));
        }
        m.try_inverse().expect("superscrew maps span the bivectors")
    })
}

impl Superscrew {
    pub fn to_bivector(&self) -> Multivector {
        let x = &self.0;
        maps::ee(&x[0])
            + maps::epep(&x[1])
            + maps::e_eq_ep3(&x[2])
            + maps::e_gt_ep(&x[3])
            + maps::e_lt_ep(&x[3])
            + maps::rotation_generator(&x[4])
    }

    pub fn from_bivector(b: &Multivector) -> Self {
        let c: SVector<f64, 15> = superscrew_inverse() * bivector_coords(b);
        Superscrew(std::array::from_fn(|i| Vec3::new(c[3 * i], c[3 * i + 1], c[3 * i + 2])))
    }

    /// The traceless matrix `M` whose bivector `2 map(M)` this is.
    pub fn to_sl4(&self) -> Mat4 {
        bivector_to_sl4(&(self.to_bivector() * 0.5)).expect("pure bivector")
    }

    pub fn from_sl4(m: &Mat4) -> Result<Self> {
        Ok(Superscrew::from_bivector(&(sl4_to_bivector(m)? * 2.0)))
    }

    /// Lie bracket in superscrew coordinates; agrees with the matrix
    /// commutator under [`Superscrew::to_sl4`].
    pub fn bracket(&self, o: &Superscrew) -> Superscrew {
        let [x1, x2, x3, x4, x5] = &self.0;
        let [y1, y2, y3, y4, y5] = &o.0;
        let one = Vec3::repeat(1.0);
        let z1 = -hadamard(x1, y3) + hadamard(x3, y1) + star(x1, y4) - star(x4, y1) + x1.cross(y5) + x5.cross(y1);
        let z2 = -star(x2, y4) + star(x4, y2) + hadamard(x2, y3) - hadamard(x3, y2) + x2.cross(y5) + x5.cross(y2);
        let z3 = one * (x2.dot(y1) - x1.dot(y2)) - hadamard(x1, y2)
            + hadamard(x2, y1)
            + (hadamard(x4, y5) - hadamard(x5, y4)).cross(&one) * 2.0;
        let z4 = (star(x1, y2) - star(x2, y1)) * 0.5 + hadamard(&x3.cross(&one), y5)
            - hadamard(x5, &y3.cross(&one))
            - x4.cross(y5)
            - x5.cross(y4);
        let z5 = (x1.cross(y2) + x2.cross(y1)) * 0.5 + hadamard(&x3.cross(&one), y4)
            - hadamard(x4, &y3.cross(&one))
            + x4.cross(y4)
            + x5.cross(y5);
        Superscrew([z1, z2, z3, z4, z5])
    }
}

/// An ordered triple `(p, q, r)` of distinct axes (stored 0-based),
/// written `"123"` etc.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ShearFamily {
    p: usize,
    q: usize,
    r: usize,
}

impl ShearFamily {
    pub const ALL: [&'static str; 6] = ["123", "132", "231", "213", "312", "321"];

    /// The upper shear `x1 += t3 x2 + t2 x3, x2 += t1 x3`.
    pub const UPPER: ShearFamily = ShearFamily { p: 0, q: 1, r: 2 };

    pub fn axes(self) -> (usize, usize, usize) {
        (self.p, self.q, self.r)
    }
}

impl FromStr for ShearFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownFamily(s.to_string());
        if !ShearFamily::ALL.contains(&s) {
            return Err(bad());
        }
        let d: Vec<usize> = s.bytes().map(|b| (b - b'1') as usize).collect();
        Ok(ShearFamily { p: d[0], q: d[1], r: d[2] })
    }
}

impl TryFrom<String> for ShearFamily {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl fmt::Display for ShearFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.p + 1, self.q + 1, self.r + 1)
    }
}

impl From<ShearFamily> for String {
    fn from(s: ShearFamily) -> Self {
        s.to_string()
    }
}

/// One-parameter families of special projective transformations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Generator {
    /// `(1 x^T; 0 I)`.
    Perspectivity { x: Vec3 },
    /// `diag(e^{-t1-t2-t3}, e^{t1}, e^{t2}, e^{t3})`.
    Dilation { t: Vec3 },
    /// `diag(1, e^t, e^t, e^t)`.
    Isotropic { t: f64 },
    /// Unipotent with `N_pq = t3`, `N_qr = t1`, `N_pr = t2` on the spatial block.
    Shear { family: ShearFamily, t: Vec3 },
}

/// A bivector `B` with `Ad_{exp B}` inducing [`generator_matrix`].
pub fn generator_bivector(g: &Generator) -> Multivector {
    match *g {
        Generator::Perspectivity { x } => maps::ee(&x) * 0.5,
        Generator::Dilation { t } => maps::e_eq_ep(&t) * -0.5,
        Generator::Isotropic { t } => k2() * (-t / 4.0),
        Generator::Shear { family, t } => {
            let (p, q, r) = family.axes();
            (wp(p, q) * t[2] + wp(q, r) * t[0] + wp(p, r) * (t[1] - t[0] * t[2] / 2.0)) * 0.5
        }
    }
}

pub fn generator_matrix(g: &Generator) -> Mat4 {
    match *g {
        Generator::Perspectivity { x } => crate::linalg::blocks4(1.0, &x, &Vec3::zeros(), &Mat3::identity()),
        Generator::Dilation { t } => {
            Mat4::from_diagonal(&nalgebra::Vector4::new((-t.sum()).exp(), t[0].exp(), t[1].exp(), t[2].exp()))
        }
        Generator::Isotropic { t } => Mat4::from_diagonal(&nalgebra::Vector4::new(1.0, t.exp(), t.exp(), t.exp())),
        Generator::Shear { family, t } => {
            let (p, q, r) = family.axes();
            let mut m = Mat4::identity();
            m[(p + 1, q + 1)] = t[2];
            m[(q + 1, r + 1)] = t[0];
            m[(p + 1, r + 1)] = t[1];
            m
        }
    }
}
