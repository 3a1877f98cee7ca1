#![allow(dead_code)]

use linegeo::cl33::{Multivector, Vector33, LEN};
use linegeo::gc4::{CoPlane, HomPoint};
use linegeo::linalg::{Mat4, Vec3};
use linegeo::random::Sampler;
use linegeo::versor::RigidMotion;
use proptest::prelude::*;

pub fn coord() -> impl Strategy<Value = f64> {
    -1.0..1.0f64
}

pub fn vec3() -> impl Strategy<Value = Vec3> {
    [coord(), coord(), coord()].prop_map(Vec3::from)
}

pub fn unit3() -> impl Strategy<Value = Vec3> {
    vec3().prop_filter("not too short", |v| v.norm() > 0.1).prop_map(|v| v.normalize())
}

pub fn vector33() -> impl Strategy<Value = Vector33> {
    (vec3(), vec3()).prop_map(|(x, y)| Vector33::new(x, y))
}

/// `|X^2| >= 0.05 |X|^2`.
pub fn invertible_vector33() -> impl Strategy<Value = Vector33> {
    vector33().prop_filter("invertible", |v| v.square().abs() >= 0.05 * v.to_vec6().norm_squared())
}

pub fn multivector() -> impl Strategy<Value = Multivector> {
    proptest::collection::vec(coord(), LEN).prop_map(|c| Multivector::from_coeffs(c.try_into().unwrap()))
}

pub fn hom_point() -> impl Strategy<Value = HomPoint> {
    (coord(), vec3()).prop_filter("nonzero", |(a, x)| a * a + x.norm_squared() > 1e-2).prop_map(|(a, x)| HomPoint::new(a, x))
}

pub fn plane() -> impl Strategy<Value = CoPlane> {
    (coord(), vec3()).prop_filter("nonzero", |(d, n)| d * d + n.norm_squared() > 1e-2).prop_map(|(d, n)| CoPlane::new(d, n))
}

/// Seeded samplers for matrices, whose conditioning matters more than shrinking.
pub fn sampler() -> impl Strategy<Value = Sampler> {
    any::<u64>().prop_map(Sampler::new)
}

pub fn gl4() -> impl Strategy<Value = Mat4> {
    sampler().prop_map(|mut s| s.gl4())
}

pub fn sl4() -> impl Strategy<Value = Mat4> {
    sampler().prop_map(|mut s| s.sl4())
}

pub fn traceless4() -> impl Strategy<Value = Mat4> {
    sampler().prop_map(|mut s| s.traceless4())
}

pub fn rigid_motion() -> impl Strategy<Value = RigidMotion> {
    sampler().prop_map(|mut s| s.rigid_motion())
}

pub fn rel(a: &[f64], b: &[f64]) -> f64 {
    linegeo::check::rel(a, b)
}

pub fn mv_rel(a: &Multivector, b: &Multivector) -> f64 {
    rel(a.coeffs(), b.coeffs())
}

/// Residual of the best fit `a ~ s b`, relative to `|a|`.
pub fn up_to_scale(a: &[f64], b: &[f64]) -> f64 {
    linegeo::linalg::proportional_error(a, b)
}
