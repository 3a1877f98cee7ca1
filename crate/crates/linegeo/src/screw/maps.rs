//! Linear maps from 3-vectors to bivectors of R^{3,3}, indexed by cyclic
//! triples `(i, j, k)`.

use nalgebra::SVector;

use crate::cl33::{e, ep, Blade, Multivector};
use crate::linalg::Vec3;

/// `E_a ^ E_b`.
pub fn ww(a: usize, b: usize) -> Multivector {
    e(a).wedge(&e(b))
}

/// `E_a ^ E'_b`.
pub fn wp(a: usize, b: usize) -> Multivector {
    e(a).wedge(&ep(b))
}

/// `E'_a ^ E'_b`.
pub fn pp(a: usize, b: usize) -> Multivector {
    ep(a).wedge(&ep(b))
}

fn cyclic(x: &Vec3, f: impl Fn(usize, usize, usize) -> Multivector) -> Multivector {
    (0..3).map(|i| f(i, (i + 1) % 3, (i + 2) % 3) * x[i]).sum()
}

/// `E E(x) = x1 E23 + x2 E31 + x3 E12`.
pub fn ee(x: &Vec3) -> Multivector {
    cyclic(x, |_, j, k| ww(j, k))
}

/// `E'E'(x) = x1 E2'3' + x2 E3'1' + x3 E1'2'`.
pub fn epep(x: &Vec3) -> Multivector {
    cyclic(x, |_, j, k| pp(j, k))
}

/// `E<E'(x) = x1 E23' + x2 E31' + x3 E12'`.
pub fn e_lt_ep(x: &Vec3) -> Multivector {
    cyclic(x, |_, j, k| wp(j, k))
}

/// `E>E'(x) = x1 E32' + x2 E13' + x3 E21'`.
pub fn e_gt_ep(x: &Vec3) -> Multivector {
    cyclic(x, |_, j, k| wp(k, j))
}

/// `E=E'(x) = x1 (E22' + E33') + x2 (E33' + E11') + x3 (E11' + E22')`.
pub fn e_eq_ep(x: &Vec3) -> Multivector {
    cyclic(x, |_, j, k| wp(j, j) + wp(k, k))
}

/// `E=E'_3(x) = sum xi (Ejj' + Ekk' - Eii') / 2`.
pub fn e_eq_ep3(x: &Vec3) -> Multivector {
    cyclic(x, |i, j, k| (wp(j, j) + wp(k, k) - wp(i, i)) * 0.5)
}

/// `(E>E' - E<E')(x)`, the infinitesimal rotation generator.
pub fn rotation_generator(x: &Vec3) -> Multivector {
    e_gt_ep(x) - e_lt_ep(x)
}

/// The 15 bivector coefficients in ascending blade order.
pub fn bivector_coords(m: &Multivector) -> SVector<f64, 15> {
    SVector::from_iterator(Blade::of_grade(2).map(|b| m.get(b)))
}

pub fn from_bivector_coords(c: &SVector<f64, 15>) -> Multivector {
    let mut m = Multivector::zero();
    for (b, v) in Blade::of_grade(2).zip(c.iter()) {
        m.set(b, *v);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        let b = |s: &str| Multivector::blade(s).unwrap();
        assert_eq!(ee(&Vec3::x()), b("23"));
        assert_eq!(ee(&Vec3::y()), b("31"));
        assert_eq!(e_gt_ep(&Vec3::z()), b("21p"));
        assert_eq!(e_lt_ep(&Vec3::y()), b("31p"));
        assert_eq!(e_eq_ep(&Vec3::x()), b("22p") + b("33p"));
        let s = e_eq_ep3(&Vec3::new(1., 1., 1.));
        assert!(s.approx_eq(&((b("11p") + b("22p") + b("33p")) * 0.5), 1e-15));
    }

    #[test]
    fn coords_round_trip() {
        let m = ee(&Vec3::new(1., 2., 3.)) + e_lt_ep(&Vec3::new(-1., 0.5, 4.));
        assert_eq!(from_bivector_coords(&bivector_coords(&m)), m);
    }
}
