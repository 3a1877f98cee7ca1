//! Grassmann-Cayley algebra of R^4: homogeneous points, planes as covectors,
//! joins and meets, and the identification of Λ²(R⁴) with R^{3,3}.
//!
//! Bivectors of R⁴ are coordinatized by the induced Witt basis
//! `Ei = e0 ^ ei` and `E'i = e_j ^ e_k` for cyclic `(i, j, k)`; the meet of
//! two planes uses `ce0 v cei = E'i` and `cei v cej = E_k`.

use serde::{Deserialize, Serialize};

use crate::cl33::Vector33;
use crate::error::{Error, Result};
use crate::linalg::{Mat4, Vec3};

/// A line of projective 3-space as a (null) vector of R^{3,3}.
pub type Line33 = Vector33;

/// Homogeneous point `x0 e0 + x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct HomPoint {
    pub x0: f64,
    pub x: Vec3,
}

impl HomPoint {
    pub fn new(x0: f64, x: Vec3) -> Self {
        HomPoint { x0, x }
    }

    /// The basis point `e_i`, `i` in `0..4`.
    pub fn basis(i: usize) -> Self {
        let mut a = [0.0; 4];
        a[i] = 1.0;
        a.into()
    }

    pub fn to_vec4(&self) -> nalgebra::Vector4<f64> {
        nalgebra::Vector4::new(self.x0, self.x[0], self.x[1], self.x[2])
    }

    pub fn from_vec4(v: &nalgebra::Vector4<f64>) -> Self {
        HomPoint::new(v[0], Vec3::new(v[1], v[2], v[3]))
    }

    pub fn is_affine(&self) -> bool {
        self.x0 != 0.0
    }
}

impl From<[f64; 4]> for HomPoint {
    fn from(a: [f64; 4]) -> Self {
        HomPoint::new(a[0], Vec3::new(a[1], a[2], a[3]))
    }
}

impl From<HomPoint> for [f64; 4] {
    fn from(p: HomPoint) -> Self {
        [p.x0, p.x[0], p.x[1], p.x[2]]
    }
}

/// Plane `d ce0 + n1 ce1 + n2 ce2 + n3 ce3`, holding the points with
/// `x0 d + x . n = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "PlaneJson", into = "PlaneJson")]
pub struct CoPlane {
    pub d: f64,
    pub n: Vec3,
}

#[derive(Serialize, Deserialize)]
struct PlaneJson {
    d: f64,
    n: [f64; 3],
}

impl From<PlaneJson> for CoPlane {
    fn from(p: PlaneJson) -> Self {
        CoPlane::new(p.d, p.n.into())
    }
}

impl From<CoPlane> for PlaneJson {
    fn from(p: CoPlane) -> Self {
        PlaneJson { d: p.d, n: p.n.into() }
    }
}

impl CoPlane {
    pub fn new(d: f64, n: Vec3) -> Self {
        CoPlane { d, n }
    }

    /// The basis covector `ce_i`, `i` in `0..4`.
    pub fn basis(i: usize) -> Self {
        let p = HomPoint::basis(i);
        CoPlane::new(p.x0, p.x)
    }

    pub fn to_vec4(&self) -> nalgebra::Vector4<f64> {
        nalgebra::Vector4::new(self.d, self.n[0], self.n[1], self.n[2])
    }

    pub fn from_vec4(v: &nalgebra::Vector4<f64>) -> Self {
        CoPlane::new(v[0], Vec3::new(v[1], v[2], v[3]))
    }
}

fn degenerate_pair(a: &nalgebra::Vector4<f64>, b: &nalgebra::Vector4<f64>, line: &Line33) -> bool {
    line.to_vec6().norm() <= 1e-12 * a.norm() * b.norm()
}

/// Plücker coordinates of the line `X1 ^ X2`: `(x0 y - y0 x, x × y)`.
pub fn plucker_line(p: &HomPoint, q: &HomPoint) -> Result<Line33> {
    let l = Vector33::new(p.x0 * q.x - q.x0 * p.x, p.x.cross(&q.x));
    if degenerate_pair(&p.to_vec4(), &q.to_vec4(), &l) {
        return Err(Error::DegenerateInput("points are dependent"));
    }
    Ok(l)
}

/// Meet `P1 v P2` of two planes: `(n1 × n2, d1 n2 - d2 n1)`.
pub fn meet_planes(p: &CoPlane, q: &CoPlane) -> Result<Line33> {
    let l = Vector33::new(p.n.cross(&q.n), p.d * q.n - q.d * p.n);
    if degenerate_pair(&p.to_vec4(), &q.to_vec4(), &l) {
        return Err(Error::DegenerateInput("planes are dependent"));
    }
    Ok(l)
}

/// Incidence bracket `X v P = x0 d + x . n`.
pub fn bracket(p: &HomPoint, q: &CoPlane) -> f64 {
    p.x0 * q.d + p.x.dot(&q.n)
}

/// Action of `A` on Λ³(R⁴) in the `ce` basis: `det(A) A^{-T}`.
pub fn wedge3(a: &Mat4) -> Result<Mat4> {
    let d = a.determinant();
    let inv = a.try_inverse().ok_or(Error::Singular)?;
    if d.abs() <= 1e-14 * a.norm().powi(4) {
        return Err(Error::Singular);
    }
    Ok(inv.transpose() * d)
}
