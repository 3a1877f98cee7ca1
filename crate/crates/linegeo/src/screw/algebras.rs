//! The six-dimensional subalgebras as spans `Q(x) + P(y)` of bivectors,
//! with their cross products in closed form and through commutators.

use std::sync::OnceLock;

use nalgebra::{SMatrix, SVector};

use super::maps::{self, bivector_coords, pp, wp, ww};
use super::{hadamard, times1, times2, Algebra, Screw};
use crate::cl33::Multivector;
use crate::error::{Error, Result};
use crate::gc4::HomPoint;
use crate::linalg::Vec3;
use crate::plucker::{rep_point, Trivector33};

type Basis = [Multivector; 6];

fn from_maps(q: impl Fn(&Vec3) -> Multivector, p: impl Fn(&Vec3) -> Multivector) -> Basis {
    let e = [Vec3::x(), Vec3::y(), Vec3::z()];
    [q(&e[0]), q(&e[1]), q(&e[2]), p(&e[0]), p(&e[1]), p(&e[2])]
}

fn build(a: Algebra) -> Basis {
    use maps::{ee, epep, rotation_generator as rot};
    match a {
        Algebra::Se3 => from_maps(rot, |y| -epep(y)),
        Algebra::So4 => [
            wp(2, 1) - wp(1, 2),
            wp(0, 2) - wp(2, 0),
            wp(1, 0) - wp(0, 1),
            pp(1, 2) + ww(1, 2),
            pp(2, 0) + ww(2, 0),
            pp(0, 1) + ww(0, 1),
        ],
        Algebra::So31 => from_maps(rot, |y| epep(y) - ee(y)),
        Algebra::So301 => from_maps(rot, ee),
        Algebra::So22 => [
            wp(1, 2) - wp(2, 1),
            -wp(0, 2) - wp(2, 0),
            wp(1, 0) + wp(0, 1),
            pp(1, 2) + ww(1, 2),
            pp(2, 0) - ww(2, 0),
            pp(0, 1) - ww(0, 1),
        ],
        Algebra::So211 => [
            wp(2, 1) - wp(1, 2),
            wp(0, 2) + wp(2, 0),
            wp(1, 0) + wp(0, 1),
            ww(1, 2),
            -ww(2, 0),
            ww(0, 1),
        ],
        Algebra::Gad => from_maps(epep, maps::e_eq_ep3),
    }
}

struct Tables {
    basis: Basis,
    /// Least-squares left inverse of the 15x6 coordinate matrix.
    pinv: SMatrix<f64, 6, 15>,
}

fn tables(a: Algebra) -> &'static Tables {
    static CELLS: [OnceLock<Tables>; 7] = [const { OnceLock::new() }; 7];
    let idx = Algebra::ALL.iter().position(|&b| b == a).expect("listed");
    CELLS[idx].get_or_init(|| {
        let basis = build(a);
        let mut m = SMatrix::<f64, 15, 6>::zeros();
        for (k, b) in basis.iter().enumerate() {
            m.set_column(k, &bivector_coords(b));
        }
        let pinv = (m.transpose() * m).try_inverse().expect("independent basis") * m.transpose();
        Tables { basis, pinv }
    })
}

/// The bivector `Q(v) + P(t)` of the screw's algebra.
pub fn algebra_lift(s: &Screw) -> Multivector {
    let b = &tables(s.algebra).basis;
    (0..3).map(|i| b[i] * s.v[i] + b[i + 3] * s.t[i]).sum()
}

/// Screw coordinates of a bivector lying in the algebra, with the
/// relative residual of the projection.
pub fn algebra_unlift(a: Algebra, m: &Multivector) -> (Screw, f64) {
    let t = tables(a);
    let c = bivector_coords(m);
    let x: SVector<f64, 6> = t.pinv * c;
    let s = Screw::new(a, Vec3::new(x[0], x[1], x[2]), Vec3::new(x[3], x[4], x[5]));
    let back = bivector_coords(&algebra_lift(&s));
    let res = (back - c).norm() / c.norm().max(f64::MIN_POSITIVE);
    (s, res)
}

fn same_algebra(a: Algebra, s1: &Screw, s2: &Screw) -> Result<()> {
    for s in [s1, s2] {
        if s.algebra != a {
            return Err(Error::AlgebraMismatch(a.name(), s.algebra.name()));
        }
    }
    Ok(())
}

/// Closed-form cross product of the algebra `a`.
pub fn algebra_cross(a: Algebra, s1: &Screw, s2: &Screw) -> Result<Screw> {
    same_algebra(a, s1, s2)?;
    let (x1, y1, x2, y2) = (&s1.v, &s1.t, &s2.v, &s2.t);
    let moment = x1.cross(y2) + y1.cross(x2);
    let (v, t) = match a {
        Algebra::Se3 | Algebra::So301 => (x1.cross(x2), moment),
        Algebra::So4 => (x1.cross(x2) + y1.cross(y2), moment),
        Algebra::So31 => (x1.cross(x2) - y1.cross(y2), moment),
        Algebra::So22 => (times1(x1, x2) + y1.cross(y2), times2(y1, x2) - times2(y2, x1)),
        Algebra::So211 => (times1(x1, x2), times2(y1, x2) - times2(y2, x1)),
        Algebra::Gad => (hadamard(x1, y2) - hadamard(y1, x2), Vec3::zeros()),
    };
    Ok(Screw::new(a, v, t))
}

/// Cross product as the commutator `(AB - BA)/2` of the lifted bivectors.
pub fn commutator_cross(a: Algebra, s1: &Screw, s2: &Screw) -> Result<Screw> {
    same_algebra(a, s1, s2)?;
    let c = algebra_lift(s1).commutator(&algebra_lift(s2)).grade(2);
    Ok(algebra_unlift(a, &c).0)
}

/// Trivector `T` with `X × Y = -(X ^ Y) . T` on screw coordinates.
pub fn algebra_trivector(a: Algebra) -> Result<Trivector33> {
    let f = |i: usize| *rep_point(&HomPoint::basis(i)).expect("basis point").as_multivector();
    let signs: [f64; 4] = match a {
        Algebra::Se3 | Algebra::So301 => [0., 1., 1., 1.],
        Algebra::So4 => [1., 1., 1., 1.],
        Algebra::So31 => [-1., 1., 1., 1.],
        Algebra::So22 => [1., 1., -1., -1.],
        Algebra::So211 => [0., 1., -1., -1.],
        Algebra::Gad => return Err(Error::NoTrivector("gad")),
    };
    let m: Multivector = (0..4).map(|i| f(i) * signs[i]).sum();
    Ok(Trivector33::new(m).expect("sum of trivectors"))
}

/// `P(x) = x1 (E33' + E22') + x2 E23 + x3 E2'3'` of inv(2,2).
pub fn inv22_p(x: &Vec3) -> Multivector {
    (wp(2, 2) + wp(1, 1)) * x[0] + ww(1, 2) * x[1] + pp(1, 2) * x[2]
}

/// `Q(y) = y1 (E33' - E22') + y2 E32' + y3 E23'` of inv(2,2).
pub fn inv22_q(y: &Vec3) -> Multivector {
    (wp(2, 2) - wp(1, 1)) * y[0] + wp(2, 1) * y[1] + wp(1, 2) * y[2]
}
