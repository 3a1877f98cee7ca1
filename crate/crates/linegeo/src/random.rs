//! Seeded samplers for the property suites.

use nalgebra::{Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cl33::{Multivector, Vector33, LEN};
use crate::gc4::{CoPlane, HomPoint};
use crate::linalg::{Mat4, Vec3};
use crate::versor::{rotation, RigidMotion};

#[derive(Debug)]
pub struct Sampler(ChaCha8Rng);

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform in `[-1, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.0.gen_range(-1.0..1.0)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        self.0.gen_range(lo..hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.0.gen_range(0..n)
    }

    pub fn coin(&mut self) -> bool {
        self.0.gen()
    }

    pub fn vec3(&mut self) -> Vec3 {
        Vec3::new(self.uniform(), self.uniform(), self.uniform())
    }

    pub fn unit3(&mut self) -> Vec3 {
        loop {
            let v = self.vec3();
            let n = v.norm();
            if n > 0.1 && n <= 1.0 {
                return v / n;
            }
        }
    }

    pub fn vector33(&mut self) -> Vector33 {
        Vector33::new(self.vec3(), self.vec3())
    }

    /// A vector with `|X^2| >= 0.05 |X|^2`.
    pub fn invertible_vector33(&mut self) -> Vector33 {
        loop {
            let v = self.vector33();
            if v.square().abs() >= 0.05 * v.to_vec6().norm_squared() {
                return v;
            }
        }
    }

    pub fn multivector(&mut self) -> Multivector {
        let mut c = [0.0; LEN];
        for x in c.iter_mut() {
            *x = self.uniform();
        }
        Multivector::from_coeffs(c)
    }

    pub fn hom_point(&mut self) -> HomPoint {
        HomPoint::new(self.uniform(), self.vec3())
    }

    pub fn plane(&mut self) -> CoPlane {
        CoPlane::new(self.uniform(), self.vec3())
    }

    fn orthogonal4(&mut self) -> Mat4 {
        let g = Matrix4::from_fn(|_, _| self.uniform());
        g.qr().q()
    }

    /// `Q1 diag(s) Q2` with singular values in `[0.5, 2]`.
    pub fn gl4(&mut self) -> Mat4 {
        let s = Vector4::from_fn(|_, _| self.range(0.5, 2.0));
        self.orthogonal4() * Mat4::from_diagonal(&s) * self.orthogonal4()
    }

    /// Determinant `+1`.
    pub fn sl4(&mut self) -> Mat4 {
        to_sl4(self.gl4())
    }

    /// Determinant `+1` with `|a00| < 1e-9`.
    pub fn sl4_small_corner(&mut self) -> Mat4 {
        let mut a = self.gl4();
        a[(0, 0)] = 1e-10 * self.uniform();
        to_sl4(a)
    }

    /// Traceless, entries of order one.
    pub fn traceless4(&mut self) -> Mat4 {
        let mut m = Matrix4::from_fn(|_, _| self.uniform());
        let t = m.trace() / 4.0;
        for i in 0..4 {
            m[(i, i)] -= t;
        }
        m
    }

    pub fn rotation(&mut self) -> crate::linalg::Mat3 {
        let axis = self.unit3();
        rotation(&axis, self.range(-std::f64::consts::PI, std::f64::consts::PI))
    }

    pub fn rigid_motion(&mut self) -> RigidMotion {
        RigidMotion { r: self.rotation(), t: self.vec3() * 2.0 }
    }
}

fn to_sl4(mut a: Mat4) -> Mat4 {
    if a.determinant() < 0.0 {
        a.column_mut(1).neg_mut();
    }
    a / a.determinant().powf(0.25)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_unimodular() {
        let (mut a, mut b) = (Sampler::new(7), Sampler::new(7));
        assert_eq!(a.sl4(), b.sl4());
        let m = a.sl4_small_corner();
        assert!((m.determinant() - 1.0).abs() < 1e-12 && m[(0, 0)].abs() < 1e-9);
        assert!(a.traceless4().trace().abs() < 1e-15);
    }
}
