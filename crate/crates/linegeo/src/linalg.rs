//! Small dense-matrix vocabulary shared by the modules.

use nalgebra::{DMatrix, Matrix3, Matrix4, Matrix6, Vector3};

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;
/// 4x4 matrix acting on homogeneous coordinates `(x0, x1, x2, x3)`.
pub type Mat4 = Matrix4<f64>;
/// 6x6 matrix acting on `E1, E2, E3, E1', E2', E3'` coordinates.
pub type Mat6 = Matrix6<f64>;

/// `[v]x`, so that `cross_matrix(v) * w == v.cross(&w)`.
pub fn cross_matrix(v: &Vec3) -> Mat3 {
    Mat3::new(0.0, -v[2], v[1], v[2], 0.0, -v[0], -v[1], v[0], 0.0)
}

/// Block swap `J = (0 I; I 0)`: the Gram matrix of the Witt basis.
pub fn j6() -> Mat6 {
    let mut m = Mat6::zeros();
    for i in 0..3 {
        m[(i, i + 3)] = 1.0;
        m[(i + 3, i)] = 1.0;
    }
    m
}

/// `T = diag(-I, I)`.
pub fn t6() -> Mat6 {
    Mat6::from_diagonal(&nalgebra::Vector6::new(-1.0, -1.0, -1.0, 1.0, 1.0, 1.0))
}

/// `diag(-1, 1, 1, 1)`, the 4x4 matrix whose Plücker transform is `T`.
pub fn t4() -> Mat4 {
    Mat4::from_diagonal(&nalgebra::Vector4::new(-1.0, 1.0, 1.0, 1.0))
}

/// Block matrix from four 3x3 blocks.
pub fn blocks6(a: &Mat3, b: &Mat3, c: &Mat3, d: &Mat3) -> Mat6 {
    let mut m = Mat6::zeros();
    m.fixed_view_mut::<3, 3>(0, 0).copy_from(a);
    m.fixed_view_mut::<3, 3>(0, 3).copy_from(b);
    m.fixed_view_mut::<3, 3>(3, 0).copy_from(c);
    m.fixed_view_mut::<3, 3>(3, 3).copy_from(d);
    m
}

/// `(a  b^T; c  D)` with a scalar corner, row vector `b`, column `c`.
pub fn blocks4(a: f64, b: &Vec3, c: &Vec3, d: &Mat3) -> Mat4 {
    let mut m = Mat4::zeros();
    m[(0, 0)] = a;
    for i in 0..3 {
        m[(0, i + 1)] = b[i];
        m[(i + 1, 0)] = c[i];
    }
    m.fixed_view_mut::<3, 3>(1, 1).copy_from(d);
    m
}

/// Numerical rank with singular values below `rel * sigma_max` treated as zero.
pub fn rank(m: &DMatrix<f64>, rel: f64) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().fold(0.0f64, |a, &b| a.max(b));
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel * max).count()
}

/// Orthonormal basis (as columns) of the null space of `m`.
pub fn null_space(m: &DMatrix<f64>, rel: f64) -> DMatrix<f64> {
    let n = m.ncols();
    // Pad with zero rows so the thin SVD exposes all right singular vectors.
    let rows = m.nrows().max(n);
    let mut padded = DMatrix::zeros(rows, n);
    padded.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let max = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));
    let cols: Vec<_> = (0..n)
        .filter(|&k| max == 0.0 || svd.singular_values[k] <= rel * max)
        .map(|k| v_t.row(k).transpose())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Scales `m` so that `|det| = 1` and its first entry (row-major) above
/// `tol * max|m|` is positive. Returns `None` for singular matrices.
pub fn normalize_mat4(m: &Mat4, tol: f64) -> Option<Mat4> {
    let d = m.determinant();
    if d.abs() <= f64::MIN_POSITIVE {
        return None;
    }
    let mut n = m / d.abs().powf(0.25);
    if let Some(s) = first_significant(n.transpose().iter(), tol) {
        if s < 0.0 {
            n = -n;
        }
    }
    Some(n)
}

/// First entry whose magnitude exceeds `tol` times the largest one.
pub fn first_significant<'a>(vals: impl Iterator<Item = &'a f64> + Clone, tol: f64) -> Option<f64> {
    let max = vals.clone().fold(0.0f64, |a, &b| a.max(b.abs()));
    vals.copied().find(|v| v.abs() > tol * max)
}

/// Relative distance of `a` from the line through `b`: `min_k |a - k b| / |a|`.
pub fn proportional_error(a: &[f64], b: &[f64]) -> f64 {
    let ab: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let bb: f64 = b.iter().map(|y| y * y).sum();
    let aa: f64 = a.iter().map(|x| x * x).sum();
    if aa == 0.0 {
        return if bb == 0.0 { 0.0 } else { 1.0 };
    }
    if bb == 0.0 {
        return 1.0;
    }
    let k = ab / bb;
    let r: f64 = a.iter().zip(b).map(|(x, y)| (x - k * y).powi(2)).sum();
    (r / aa).sqrt()
}

/// Coefficients `[c0, c1, c2, c3]` of `det(x I - m) = x^4 + c3 x^3 + c2 x^2 + c1 x + c0`
/// (Faddeev-LeVerrier).
pub fn char_poly4(m: &Mat4) -> [f64; 4] {
    let mut c = [0.0; 5];
    c[4] = 1.0;
    let mut mk = Mat4::zeros();
    for k in 1..=4 {
        mk = m * (mk + Mat4::identity() * c[5 - k]);
        c[4 - k] = -mk.trace() / k as f64;
    }
    [c[0], c[1], c[2], c[3]]
}
