//! Dense multivectors of the Clifford algebra Cl(3,3).
//!
//! Generators are the Witt basis `E1, E2, E3, E1', E2', E3'` with
//! `Ei . Ej' = delta_ij` and all other inner products zero. A blade is a
//! 6-bit mask over that order (bit 0 is `E1`, bit 3 is `E1'`), and the
//! canonical blade is the wedge of its generators in ascending bit order,
//! so unprimed generators always come first: `E12'3'` is `E1 ^ E2' ^ E3'`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use nalgebra::{Vector3, Vector6};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of generators.
pub const DIM: usize = 6;
/// Number of blades.
pub const LEN: usize = 64;

/// A basis blade, stored as a bitmask over the six generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Blade(u8);

impl Blade {
    pub const SCALAR: Blade = Blade(0);

    /// Panics when `bits >= 64`.
    pub const fn new(bits: u8) -> Blade {
        assert!(bits < 64, "blade mask out of range");
        Blade(bits)
    }

    /// The generator `E_{i+1}` for `i < 3`, `E'_{i-2}` for `3 <= i < 6`.
    pub const fn generator(i: usize) -> Blade {
        Blade::new(1 << i)
    }

    pub const fn bits(self) -> u8 {
        self.0
    }

    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub const fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Generator indices in canonical order.
    pub fn generators(self) -> impl Iterator<Item = usize> {
        (0..DIM).filter(move |i| self.0 >> i & 1 == 1)
    }

    pub fn all() -> impl Iterator<Item = Blade> {
        (0..LEN as u8).map(Blade)
    }

    /// Blades of grade `k` in ascending mask order.
    pub fn of_grade(k: usize) -> impl Iterator<Item = Blade> {
        Blade::all().filter(move |b| b.grade() == k)
    }

    /// Label such as `"12p3p"`; the unit blade is `"scalar"`.
    pub fn label(self) -> String {
        if self.0 == 0 {
            return "scalar".to_owned();
        }
        let mut s = String::new();
        for i in self.generators() {
            if i < 3 {
                s.push(char::from(b'1' + i as u8));
            } else {
                s.push(char::from(b'1' + (i - 3) as u8));
                s.push('p');
            }
        }
        s
    }

    /// Parses a label written in any generator order and returns the
    /// canonical blade with the sign of the reordering, so `"3p1"` gives
    /// `(E13', -1)`.
    pub fn parse(label: &str) -> Result<(Blade, f64)> {
        let bad = || Error::BadLabel(label.to_owned());
        if label == "scalar" {
            return Ok((Blade::SCALAR, 1.0));
        }
        if label.is_empty() {
            return Err(bad());
        }
        let bytes = label.as_bytes();
        let mut gens = Vec::new();
        let mut k = 0;
        while k < bytes.len() {
            let d = match bytes[k] {
                c @ b'1'..=b'3' => (c - b'1') as usize,
                _ => return Err(bad()),
            };
            if bytes.get(k + 1) == Some(&b'p') {
                gens.push(d + 3);
                k += 2;
            } else {
                gens.push(d);
                k += 1;
            }
        }
        let mut bits = 0u8;
        let mut inversions = 0;
        for (n, &g) in gens.iter().enumerate() {
            if bits >> g & 1 == 1 {
                return Err(bad());
            }
            bits |= 1 << g;
            inversions += gens[..n].iter().filter(|&&h| h > g).count();
        }
        let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
        Ok((Blade(bits), sign))
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Witt inner product of two generators.
const fn metric(i: usize, j: usize) -> i32 {
    (i + 3 == j || j + 3 == i) as i32
}

/// Sign of `a ^ b` relative to the canonical blade `a | b`, for disjoint masks.
fn reorder_sign(a: u8, b: u8) -> i32 {
    let mut swaps = 0;
    let mut x = a >> 1;
    while x != 0 {
        swaps += (x & b).count_ones();
        x >>= 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `e_i ⌋ B` for a generator and a blade.
fn contract_generator(i: usize, b: u8) -> Vec<(u8, i32)> {
    let mut out = Vec::new();
    for (m, j) in Blade(b).generators().enumerate() {
        let g = metric(i, j);
        if g != 0 {
            let sign = if m % 2 == 0 { 1 } else { -1 };
            out.push((b & !(1 << j), sign * g));
        }
    }
    out
}

/// `e_i B = e_i ⌋ B + e_i ^ B`.
fn generator_times(i: usize, b: u8) -> Vec<(u8, i32)> {
    let mut out = contract_generator(i, b);
    if b >> i & 1 == 0 {
        out.push((b | 1 << i, reorder_sign(1 << i, b)));
    }
    out
}

type Terms = Vec<(u8, i32)>;

/// Blade products with integer coefficients, built by peeling the lowest
/// generator off the left factor: `(e ^ A) B = e (A B) - (e ⌋ A) B`.
fn table() -> &'static [Terms] {
    static TABLE: OnceLock<Vec<Terms>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t: Vec<Terms> = vec![Vec::new(); LEN * LEN];
        for (b, slot) in t.iter_mut().take(LEN).enumerate() {
            *slot = vec![(b as u8, 1)];
        }
        for a in 1..LEN {
            let a1 = a.trailing_zeros() as usize;
            let rest = a & !(1 << a1);
            for b in 0..LEN {
                let mut acc = [0i32; LEN];
                for &(k, v) in &t[rest * LEN + b] {
                    for (kk, vv) in generator_times(a1, k) {
                        acc[kk as usize] += v * vv;
                    }
                }
                for (k, v) in contract_generator(a1, rest as u8) {
                    for &(kk, vv) in &t[k as usize * LEN + b] {
                        acc[kk as usize] -= v * vv;
                    }
                }
                t[a * LEN + b] = acc
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(k, &v)| (k as u8, v))
                    .collect();
            }
        }
        t
    })
}

/// Product of two basis blades as `(blade, coefficient)` terms.
pub fn blade_product(a: Blade, b: Blade) -> impl Iterator<Item = (Blade, f64)> {
    table()[a.index() * LEN + b.index()]
        .iter()
        .map(|&(k, v)| (Blade(k), v as f64))
}

/// A dense element of Cl(3,3).
#[derive(Clone, Copy, PartialEq)]
pub struct Multivector {
    c: [f64; LEN],
}

impl Default for Multivector {
    fn default() -> Self {
        Multivector::zero()
    }
}

impl Multivector {
    pub const fn zero() -> Self {
        Multivector { c: [0.0; LEN] }
    }

    pub fn scalar(s: f64) -> Self {
        let mut m = Multivector::zero();
        m.c[0] = s;
        m
    }

    pub fn basis(b: Blade) -> Self {
        let mut m = Multivector::zero();
        m.c[b.index()] = 1.0;
        m
    }

    /// Blade from a label in any generator order, with the reordering sign.
    pub fn blade(label: &str) -> Result<Self> {
        let (b, s) = Blade::parse(label)?;
        Ok(Multivector::basis(b) * s)
    }

    pub fn from_coeffs(c: [f64; LEN]) -> Self {
        Multivector { c }
    }

    pub fn coeffs(&self) -> &[f64; LEN] {
        &self.c
    }

    pub fn get(&self, b: Blade) -> f64 {
        self.c[b.index()]
    }

    pub fn set(&mut self, b: Blade, v: f64) {
        self.c[b.index()] = v;
    }

    /// Nonzero `(blade, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (Blade, f64)> + '_ {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(|(k, &v)| (Blade(k as u8), v))
    }

    pub fn scalar_part(&self) -> f64 {
        self.c[0]
    }

    pub fn grade(&self, k: usize) -> Self {
        let mut m = Multivector::zero();
        for b in Blade::of_grade(k) {
            m.c[b.index()] = self.c[b.index()];
        }
        m
    }

    /// True when every coefficient outside grade `k` is at most `tol` times
    /// the largest coefficient.
    pub fn is_grade(&self, k: usize, tol: f64) -> bool {
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        Blade::all()
            .filter(|b| b.grade() != k)
            .all(|b| self.c[b.index()].abs() <= tol * scale)
    }

    pub fn reverse(&self) -> Self {
        let mut m = *self;
        for b in Blade::all() {
            if (b.grade() / 2) % 2 == 1 {
                m.c[b.index()] = -m.c[b.index()];
            }
        }
        m
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.c.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Coefficient-wise inner product.
    pub fn coeff_dot(&self, o: &Multivector) -> f64 {
        self.c.iter().zip(o.c.iter()).map(|(a, b)| a * b).sum()
    }

    /// Max coefficient difference, relative to the larger operand (or 1).
    pub fn rel_diff(&self, o: &Multivector) -> f64 {
        let scale = self.max_abs().max(o.max_abs()).max(1.0);
        (*self - *o).max_abs() / scale
    }

    pub fn approx_eq(&self, o: &Multivector, tol: f64) -> bool {
        self.rel_diff(o) <= tol
    }

    /// Clifford product truncated to the terms whose output grade passes
    /// `keep(grade_a, grade_b, grade_out)`.
    fn product_where(&self, o: &Multivector, keep: impl Fn(usize, usize, usize) -> bool) -> Self {
        let t = table();
        let mut out = [0.0; LEN];
        for (a, &x) in self.c.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            let ga = a.count_ones() as usize;
            for (b, &y) in o.c.iter().enumerate() {
                if y == 0.0 {
                    continue;
                }
                let gb = b.count_ones() as usize;
                for &(k, v) in &t[a * LEN + b] {
                    if keep(ga, gb, k.count_ones() as usize) {
                        out[k as usize] += x * y * v as f64;
                    }
                }
            }
        }
        Multivector { c: out }
    }

    /// Clifford (geometric) product.
    pub fn gp(&self, o: &Multivector) -> Self {
        self.product_where(o, |_, _, _| true)
    }

    /// Exterior product.
    pub fn wedge(&self, o: &Multivector) -> Self {
        let mut out = [0.0; LEN];
        for (a, &x) in self.c.iter().enumerate() {
            if x == 0.0 {
                continue;
            }
            for (b, &y) in o.c.iter().enumerate() {
                if y == 0.0 || a & b != 0 {
                    continue;
                }
                out[a | b] += x * y * reorder_sign(a as u8, b as u8) as f64;
            }
        }
        Multivector { c: out }
    }

    /// Left contraction `self ⌋ o`.
    pub fn left_contraction(&self, o: &Multivector) -> Self {
        self.product_where(o, |ga, gb, g| gb >= ga && g == gb - ga)
    }

    /// Right contraction `self ⌊ o`.
    pub fn right_contraction(&self, o: &Multivector) -> Self {
        self.product_where(o, |ga, gb, g| ga >= gb && g == ga - gb)
    }

    /// Inner product `<A B>_{|r-s|}` on homogeneous parts, zero against scalars.
    /// This is the dot written between multivectors throughout the crate.
    pub fn dot(&self, o: &Multivector) -> Self {
        self.product_where(o, |ga, gb, g| ga > 0 && gb > 0 && g == ga.abs_diff(gb))
    }

    /// Scalar part of the Clifford product.
    pub fn scalar_product(&self, o: &Multivector) -> f64 {
        self.product_where(o, |_, _, g| g == 0).c[0]
    }

    /// `(self o - o self) / 2`.
    pub fn commutator(&self, o: &Multivector) -> Self {
        (self.gp(o) - o.gp(self)) * 0.5
    }

    /// Exponential of a bivector by scaling and squaring of the power series.
    pub fn exp(&self) -> Result<Self> {
        if !self.is_grade(2, 1e-12) {
            return Err(Error::WrongGrade(2));
        }
        let n = self.norm();
        let mut squarings = 0;
        while n / f64::powi(2.0, squarings) > 0.5 {
            squarings += 1;
        }
        let b = *self * f64::powi(2.0, -squarings);
        let mut sum = Multivector::scalar(1.0);
        let mut term = sum;
        let mut converged = false;
        for k in 1..=64 {
            term = term.gp(&b) * (1.0 / k as f64);
            sum += term;
            if term.max_abs() <= 1e-17 * sum.max_abs() {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence);
        }
        for _ in 0..squarings {
            sum = sum.gp(&sum);
        }
        Ok(sum)
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (b, v) in self.terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{v}*{b}")?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(mut self, o: Multivector) -> Multivector {
        self += o;
        self
    }
}

impl AddAssign for Multivector {
    fn add_assign(&mut self, o: Multivector) {
        for (a, b) in self.c.iter_mut().zip(o.c.iter()) {
            *a += b;
        }
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(mut self, o: Multivector) -> Multivector {
        self -= o;
        self
    }
}

impl SubAssign for Multivector {
    fn sub_assign(&mut self, o: Multivector) {
        for (a, b) in self.c.iter_mut().zip(o.c.iter()) {
            *a -= b;
        }
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self * -1.0
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;
    fn mul(mut self, s: f64) -> Multivector {
        for a in self.c.iter_mut() {
            *a *= s;
        }
        self
    }
}

impl Mul<Multivector> for f64 {
    type Output = Multivector;
    fn mul(self, m: Multivector) -> Multivector {
        m * self
    }
}

impl Mul for Multivector {
    type Output = Multivector;
    fn mul(self, o: Multivector) -> Multivector {
        self.gp(&o)
    }
}

impl std::iter::Sum for Multivector {
    fn sum<I: Iterator<Item = Multivector>>(iter: I) -> Multivector {
        iter.fold(Multivector::zero(), |a, b| a + b)
    }
}

impl Serialize for Multivector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let map: std::collections::BTreeMap<String, f64> =
            self.terms().map(|(b, v)| (b.label(), v)).collect();
        map.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Multivector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let map = std::collections::BTreeMap::<String, f64>::deserialize(d)?;
        let mut m = Multivector::zero();
        for (label, v) in map {
            let (b, s) = Blade::parse(&label).map_err(serde::de::Error::custom)?;
            m.c[b.index()] += s * v;
        }
        Ok(m)
    }
}

/// Generator `E_{i+1}`, `i` in `0..3`.
pub fn e(i: usize) -> Multivector {
    assert!(i < 3);
    Multivector::basis(Blade::generator(i))
}

/// Generator `E'_{i+1}`, `i` in `0..3`.
pub fn ep(i: usize) -> Multivector {
    assert!(i < 3);
    Multivector::basis(Blade::generator(i + 3))
}

fn blade_of(label: &str) -> Multivector {
    Multivector::blade(label).expect("built-in label")
}

/// `I3 = E1 ^ E2 ^ E3`.
pub fn i3() -> Multivector {
    blade_of("123")
}

/// `J3 = E1' ^ E2' ^ E3'`.
pub fn j3() -> Multivector {
    blade_of("1p2p3p")
}

/// Pseudoscalar `I33 = I3 ^ J3`; it squares to 1.
pub fn i33() -> Multivector {
    blade_of("1231p2p3p")
}

/// Symplectic form `K2 = E1^E1' + E2^E2' + E3^E3'`.
pub fn k2() -> Multivector {
    blade_of("11p") + blade_of("22p") + blade_of("33p")
}

/// `C3 = E12'3' + E23'1' + E31'2'`.
pub fn c3() -> Multivector {
    blade_of("12p3p") + blade_of("23p1p") + blade_of("31p2p")
}

/// `D3 = E1'23 + E2'31 + E3'12`.
pub fn d3() -> Multivector {
    blade_of("1p23") + blade_of("2p31") + blade_of("3p12")
}

/// A vector `E(x) + E'(y)` of R^{3,3} in screw form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[[f64; 3]; 2]", into = "[[f64; 3]; 2]")]
pub struct Vector33 {
    pub x: Vector3<f64>,
    pub y: Vector3<f64>,
}

impl From<[[f64; 3]; 2]> for Vector33 {
    fn from(a: [[f64; 3]; 2]) -> Self {
        Vector33::new(Vector3::from(a[0]), Vector3::from(a[1]))
    }
}

impl From<Vector33> for [[f64; 3]; 2] {
    fn from(v: Vector33) -> Self {
        [v.x.into(), v.y.into()]
    }
}

impl Vector33 {
    pub const fn new(x: Vector3<f64>, y: Vector3<f64>) -> Self {
        Vector33 { x, y }
    }

    pub fn zero() -> Self {
        Vector33::new(Vector3::zeros(), Vector3::zeros())
    }

    /// Coordinates in the order `E1, E2, E3, E1', E2', E3'`.
    pub fn from_vec6(v: &Vector6<f64>) -> Self {
        Vector33::new(Vector3::new(v[0], v[1], v[2]), Vector3::new(v[3], v[4], v[5]))
    }

    pub fn to_vec6(&self) -> Vector6<f64> {
        Vector6::new(self.x[0], self.x[1], self.x[2], self.y[0], self.y[1], self.y[2])
    }

    /// `x1 . y2 + y1 . x2`.
    pub fn dot(&self, o: &Vector33) -> f64 {
        self.x.dot(&o.y) + self.y.dot(&o.x)
    }

    /// `X^2 = 2 x . y`.
    pub fn square(&self) -> f64 {
        self.dot(self)
    }

    /// Invertible when the square is nonzero relative to the coordinates.
    pub fn is_invertible(&self, tol: f64) -> bool {
        self.square().abs() > tol * self.to_vec6().norm_squared()
    }

    pub fn to_multivector(&self) -> Multivector {
        let mut m = Multivector::zero();
        for i in 0..3 {
            m.c[1 << i] = self.x[i];
            m.c[1 << (i + 3)] = self.y[i];
        }
        m
    }

    /// Grade-1 part of `m`; fails if anything else is present beyond `tol`.
    pub fn from_multivector(m: &Multivector, tol: f64) -> Result<Self> {
        if !m.is_grade(1, tol) {
            return Err(Error::WrongGrade(1));
        }
        Ok(Vector33::new(
            Vector3::new(m.c[1], m.c[2], m.c[4]),
            Vector3::new(m.c[8], m.c[16], m.c[32]),
        ))
    }

    /// `T X = (-x, y)`.
    pub fn t_image(&self) -> Self {
        Vector33::new(-self.x, self.y)
    }

    /// `J X = (y, x)`.
    pub fn j_image(&self) -> Self {
        Vector33::new(self.y, self.x)
    }
}

impl Add for Vector33 {
    type Output = Vector33;
    fn add(self, o: Vector33) -> Vector33 {
        Vector33::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vector33 {
    type Output = Vector33;
    fn sub(self, o: Vector33) -> Vector33 {
        Vector33::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vector33 {
    type Output = Vector33;
    fn neg(self) -> Vector33 {
        Vector33::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vector33 {
    type Output = Vector33;
    fn mul(self, s: f64) -> Vector33 {
        Vector33::new(self.x * s, self.y * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        for b in Blade::all() {
            assert_eq!(Blade::parse(&b.label()).unwrap(), (b, 1.0));
        }
        assert_eq!(Blade::parse("3p1").unwrap(), (Blade::new(0b100001), -1.0));
        assert!(Blade::parse("11").is_err());
        assert!(Blade::parse("4").is_err());
    }

    #[test]
    fn witt_metric() {
        let p = e(0) * ep(0);
        assert_eq!(p, Multivector::scalar(1.0) + blade_of("11p"));
        assert_eq!(e(0) * e(0), Multivector::zero());
        assert_eq!(ep(1) * ep(1), Multivector::zero());
        assert_eq!(e(0) * ep(1), blade_of("12p"));
    }

    #[test]
    fn named_constants() {
        assert_eq!(i33() * i33(), Multivector::scalar(1.0));
        let k = k2();
        let lhs = k * k;
        let rhs = Multivector::scalar(3.0) - 2.0 * k * i33();
        assert!(lhs.approx_eq(&rhs, 0.0));
        assert_eq!(ep(0).left_contraction(&i3()), blade_of("23"));
    }

    #[test]
    fn contraction_example() {
        assert_eq!(e(0).left_contraction(&(ep(0).wedge(&ep(1)).wedge(&ep(2)))), blade_of("2p3p"));
    }

    #[test]
    fn exp_of_zero_and_nilpotent() {
        assert_eq!(Multivector::zero().exp().unwrap(), Multivector::scalar(1.0));
        let b = -0.5 * blade_of("2p3p");
        assert!(b.exp().unwrap().approx_eq(&(Multivector::scalar(1.0) + b), 1e-15));
        assert_eq!(Multivector::scalar(1.0).exp(), Err(Error::WrongGrade(2)));
    }
}
