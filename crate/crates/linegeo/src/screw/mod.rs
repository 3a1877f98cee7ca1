//! Screw algebra: se(3) as the subspace `X . C3` of bivectors, its cross
//! product on screw forms `(v, t)`, virtual work, exponentials of rigid
//! motions, and the other six-dimensional subalgebras of sl(4).

mod algebras;
pub mod maps;
mod sl4;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use algebras::{
    algebra_cross, algebra_lift, algebra_trivector, algebra_unlift, commutator_cross, inv22_p,
    inv22_q,
};
pub use sl4::{
    bivector_to_sl4, generator_bivector, generator_matrix, sl4_to_bivector, sl4_to_mat6, Generator,
    ShearFamily, Superscrew,
};

use crate::cl33::{c3, d3, i3, j3, Multivector, Vector33};
use crate::error::{Error, Result};
use crate::linalg::{cross_matrix, Mat3, Vec3};
use crate::plucker::Trivector33;
use crate::versor::RigidMotion;

/// Lie subalgebras of sl(4) with a screw form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algebra {
    #[default]
    Se3,
    So4,
    So31,
    So301,
    So22,
    So211,
    Gad,
}

impl Algebra {
    pub const ALL: [Algebra; 7] = [
        Algebra::Se3,
        Algebra::So4,
        Algebra::So31,
        Algebra::So301,
        Algebra::So22,
        Algebra::So211,
        Algebra::Gad,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algebra::Se3 => "se3",
            Algebra::So4 => "so4",
            Algebra::So31 => "so31",
            Algebra::So301 => "so301",
            Algebra::So22 => "so22",
            Algebra::So211 => "so211",
            Algebra::Gad => "gad",
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algebra {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Algebra::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::UnknownAlgebra(s.to_string()))
    }
}

/// An element `(v, t)` of one of the subalgebras.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Screw {
    #[serde(default)]
    pub algebra: Algebra,
    pub v: Vec3,
    pub t: Vec3,
}

impl Screw {
    pub fn new(algebra: Algebra, v: Vec3, t: Vec3) -> Self {
        Screw { algebra, v, t }
    }

    pub fn se3(v: Vec3, t: Vec3) -> Self {
        Screw::new(Algebra::Se3, v, t)
    }

    pub fn from_vector33(algebra: Algebra, x: &Vector33) -> Self {
        Screw::new(algebra, x.x, x.y)
    }

    pub fn to_vector33(&self) -> Vector33 {
        Vector33::new(self.v, self.t)
    }

    /// Inner product `v1 . t2 + t1 . v2`.
    pub fn pairing(&self, o: &Screw) -> f64 {
        self.to_vector33().dot(&o.to_vector33())
    }

    /// Axis, original center, ratio and angle of an se(3) screw;
    /// `None` for pure translations.
    pub fn axis(&self) -> Option<ScrewAxis> {
        let theta = self.v.norm();
        if theta == 0.0 {
            return None;
        }
        let v = self.v / theta;
        let m = self.t / theta;
        let c = v.cross(&m);
        Some(ScrewAxis { direction: v, center: c - c.dot(&v) * v, ratio: m.dot(&v), angle: theta })
    }

    fn require(&self, a: Algebra) -> Result<()> {
        if self.algebra == a {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch(a.name(), self.algebra.name()))
        }
    }
}

/// `(v, t) = angle (v, c × v + ratio v)` with `v` a unit vector and `c . v = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScrewAxis {
    pub direction: Vec3,
    pub center: Vec3,
    pub ratio: f64,
    pub angle: f64,
}

/// Force `f` and torque `q`, the vector `E(f) + E'(q)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Wrench {
    pub f: Vec3,
    pub q: Vec3,
}

impl Wrench {
    pub fn new(f: Vec3, q: Vec3) -> Self {
        Wrench { f, q }
    }

    pub fn to_vector33(&self) -> Vector33 {
        Vector33::new(self.f, self.q)
    }
}

/// Componentwise product.
pub fn hadamard(x: &Vec3, y: &Vec3) -> Vec3 {
    x.component_mul(y)
}

/// Symmetric cross product `(x2 y3 + x3 y2, x3 y1 + x1 y3, x1 y2 + x2 y1)`.
pub fn star(x: &Vec3, y: &Vec3) -> Vec3 {
    Vec3::new(x[1] * y[2] + x[2] * y[1], x[2] * y[0] + x[0] * y[2], x[0] * y[1] + x[1] * y[0])
}

/// `x ×1 y = (x2 y3 - x3 y2, -(x3 y1 - x1 y3), -(x1 y2 - x2 y1))`.
pub fn times1(x: &Vec3, y: &Vec3) -> Vec3 {
    let c = x.cross(y);
    Vec3::new(c[0], -c[1], -c[2])
}

/// `x ×2 y = (-(x2 y3 - x3 y2), -(x3 y1 + x1 y3), x1 y2 + x2 y1)`.
pub fn times2(x: &Vec3, y: &Vec3) -> Vec3 {
    Vec3::new(
        -(x[1] * y[2] - x[2] * y[1]),
        -(x[2] * y[0] + x[0] * y[2]),
        x[0] * y[1] + x[1] * y[0],
    )
}

/// Selector for [`vector_product`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VectorProduct {
    Odot,
    Star,
    Times1,
    Times2,
}

pub fn vector_product(x: &Vec3, y: &Vec3, kind: VectorProduct) -> Vec3 {
    match kind {
        VectorProduct::Odot => hadamard(x, y),
        VectorProduct::Star => star(x, y),
        VectorProduct::Times1 => times1(x, y),
        VectorProduct::Times2 => times2(x, y),
    }
}

/// `(v1 × v2, v1 × t2 + t1 × v2)`, the bracket of se(3).
pub fn se3_cross(a: &Screw, b: &Screw) -> Result<Screw> {
    a.require(Algebra::Se3)?;
    b.require(Algebra::Se3)?;
    Ok(Screw::se3(a.v.cross(&b.v), a.v.cross(&b.t) + a.t.cross(&b.v)))
}

/// 4x4 matrix `(0 0; t v×)` of an se(3) screw.
pub fn se3_matrix(s: &Screw) -> crate::linalg::Mat4 {
    crate::linalg::blocks4(0.0, &Vec3::zeros(), &s.t, &cross_matrix(&s.v))
}

/// `-(X ^ Y) . T`.
pub fn trivector_cross(t: &Trivector33, x: &Vector33, y: &Vector33) -> Vector33 {
    let w = x.to_multivector().wedge(&y.to_multivector());
    let r = -w.dot(t.as_multivector());
    Vector33::from_multivector(&r, 1.0).expect("bivector . trivector is a vector")
}

/// `X . C3 = E'E'(y) - (E>E' - E<E')(x)`.
pub fn c3_lift(x: &Vector33) -> Multivector {
    x.to_multivector().dot(&c3())
}

/// `X . D3 = E E(x) - (E>E' - E<E')(y)`.
pub fn d3_lift(x: &Vector33) -> Multivector {
    x.to_multivector().dot(&d3())
}

/// `(motion . (C3 + lambda I3)) . (wrench . (D3 + lambda J3))`, which
/// equals `-2 v . q - (1 + lambda^2) u . f` for `motion = (v, u)` and
/// `wrench = (f, q)`.
pub fn virtual_work(motion: &Screw, wrench: &Wrench, lambda: f64) -> f64 {
    let a = motion.to_vector33().to_multivector().dot(&(c3() + i3() * lambda));
    let b = wrench.to_vector33().to_multivector().dot(&(d3() + j3() * lambda));
    a.scalar_product(&b)
}

/// The classical pairing `f . u + q . v`.
pub fn classical_work(motion: &Screw, wrench: &Wrench) -> f64 {
    motion.to_vector33().dot(&wrench.to_vector33())
}

/// The common perpendicular of two screw axes: the foot point `y`, the
/// signed distance `d` from the first axis to the second along
/// `l1 × l2`, and `mu` with `L1 × L2 = (n, y × n + mu n)` for
/// `n = l1 × l2` (after scaling both screws to unit directions).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommonPerpendicular {
    pub y: Vec3,
    pub d: f64,
    pub mu: f64,
}

pub fn common_perpendicular(a: &Screw, b: &Screw) -> Result<CommonPerpendicular> {
    a.require(Algebra::Se3)?;
    b.require(Algebra::Se3)?;
    let (Some(p), Some(q)) = (a.axis(), b.axis()) else {
        return Err(Error::DegenerateInput("pure translation has no axis"));
    };
    let (l1, l2, c1, c2) = (p.direction, q.direction, p.center, q.center);
    let n = l1.cross(&l2);
    let nn = n.norm();
    if nn <= 1e-12 {
        return Err(Error::ParallelAxes);
    }
    let y = (c1.dot(&l2) * l2 + c2.dot(&l1) * l1) / (nn * nn);
    let d = Mat3::from_columns(&[c2 - c1, l1, l2]).determinant() / nn;
    let mu = p.ratio + q.ratio + d * l1.dot(&l2) / nn;
    Ok(CommonPerpendicular { y, d, mu })
}

/// `exp (0 0; t v×)` in closed form.
pub fn se3_exp(s: &Screw) -> Result<RigidMotion> {
    s.require(Algebra::Se3)?;
    let theta = s.v.norm();
    if theta < 1e-12 {
        return Ok(RigidMotion::translation(s.t));
    }
    let k = cross_matrix(&s.v);
    let k2 = k * k;
    let (sn, cs) = theta.sin_cos();
    let r = Mat3::identity() + k * (sn / theta) + k2 * ((1.0 - cs) / (theta * theta));
    let v = Mat3::identity() + k * ((1.0 - cs) / (theta * theta)) + k2 * ((theta - sn) / theta.powi(3));
    Ok(RigidMotion { r, t: v * s.t })
}

/// Inverse of [`se3_exp`] with the angle in `[0, pi]`:
/// `(theta v, theta c × v + d v)`.
pub fn se3_log(m: &RigidMotion) -> Screw {
    match (m.axis_angle(), m.center()) {
        (Some((v, theta)), Some(c)) => Screw::se3(theta * v, theta * c.cross(&v) + m.drive() * v),
        _ => Screw::se3(Vec3::zeros(), m.t),
    }
}

/// `1/2 {(E>E' - E<E')(theta v) - E'E'(theta c × v + d v)}`, whose
/// exponential is a spinor inducing `m`.
pub fn se3_bivector(m: &RigidMotion) -> Multivector {
    let s = se3_log(m);
    (maps::rotation_generator(&s.v) - maps::epep(&s.t)) * 0.5
}
