//! Small dense linear algebra: 3-vectors, 3x3 matrices, a Householder
//! least-squares solver, and a symmetric 3x3 eigensolver.
//!
//! Everything here is sized for the problems in this crate (tall-skinny
//! design matrices with 3 or 4 columns), so no external matrix library
//! is pulled in.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// A 3D vector of `f64`, used for positions (m), velocities (m/s),
/// accelerations (m/s^2), angular velocities (rad/s), and unit directions.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };
    pub const X: Vec3 = Vec3 { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: Vec3 = Vec3 { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 1.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Unit vector in the same direction; `Vec3::ZERO` if the norm is
    /// below 1e-12.
    pub fn normalized(self) -> Vec3 {
        let n = self.norm();
        if n < 1e-12 {
            Vec3::ZERO
        } else {
            self / n
        }
    }

    /// Angle between two vectors in radians, in [0, pi], computed as
    /// `atan2(|a x b|, a . b)`, which stays accurate for nearly parallel
    /// and nearly antiparallel vectors where `acos` of the dot product
    /// loses precision.
    pub fn angle_to(self, other: Vec3) -> f64 {
        if self.norm_squared() < 1e-300 || other.norm_squared() < 1e-300 {
            return 0.0;
        }
        self.cross(other).norm().atan2(self.dot(other))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Any two unit vectors orthogonal to `self` (itself assumed unit),
    /// forming a right-handed triple `(e1, e2, self)`.
    pub fn orthonormal_basis(self) -> (Vec3, Vec3) {
        let helper = if self.x.abs() < 0.9 { Vec3::X } else { Vec3::Y };
        let e1 = self.cross(helper).normalized();
        let e2 = self.cross(e1);
        (e1, e2)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Vec3 {
    fn sub_assign(&mut self, o: Vec3) {
        *self = *self - o;
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Row-major 3x3 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn from_rows(r0: Vec3, r1: Vec3, r2: Vec3) -> Mat3 {
        Mat3([r0.to_array(), r1.to_array(), r2.to_array()])
    }

    pub fn row(&self, i: usize) -> Vec3 {
        Vec3::new(self.0[i][0], self.0[i][1], self.0[i][2])
    }

    pub fn col(&self, j: usize) -> Vec3 {
        Vec3::new(self.0[0][j], self.0[1][j], self.0[2][j])
    }

    pub fn transpose(&self) -> Mat3 {
        let m = &self.0;
        Mat3([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn mul_vec(&self, v: Vec3) -> Vec3 {
        Vec3::new(self.row(0).dot(v), self.row(1).dot(v), self.row(2).dot(v))
    }

    pub fn mul_mat(&self, o: &Mat3) -> Mat3 {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.row(i).dot(o.col(j));
            }
        }
        Mat3(out)
    }

    /// Skew-symmetric cross-product matrix `[v]x` with `[v]x u = v x u`.
    pub fn skew(v: Vec3) -> Mat3 {
        Mat3([[0.0, -v.z, v.y], [v.z, 0.0, -v.x], [-v.y, v.x, 0.0]])
    }

    /// Outer product `a b^T`.
    pub fn outer(a: Vec3, b: Vec3) -> Mat3 {
        Mat3([
            [a.x * b.x, a.x * b.y, a.x * b.z],
            [a.y * b.x, a.y * b.y, a.y * b.z],
            [a.z * b.x, a.z * b.y, a.z * b.z],
        ])
    }

    pub fn scale(&self, s: f64) -> Mat3 {
        let mut m = self.0;
        for row in &mut m {
            for v in row {
                *v *= s;
            }
        }
        Mat3(m)
    }

    pub fn add_mat(&self, o: &Mat3) -> Mat3 {
        let mut m = self.0;
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += o.0[i][j];
            }
        }
        Mat3(m)
    }
}

/// Least-squares solve of `A x = b` by Householder QR.
///
/// `a` is `rows x cols` row-major with `rows >= cols`; `b` has one column
/// per right-hand side (`rows x nrhs`, row-major). Returns `cols x nrhs`
/// solutions (row-major). Fails with [`Error::RankDeficient`] when a
/// diagonal of R collapses relative to the largest one.
pub fn lstsq(rows: usize, cols: usize, a: &[f64], b: &[f64], nrhs: usize) -> Result<Vec<f64>> {
    assert_eq!(a.len(), rows * cols);
    assert_eq!(b.len(), rows * nrhs);
    assert!(rows >= cols && cols > 0);

    let mut a = a.to_vec();
    let mut b = b.to_vec();

    for k in 0..cols {
        let mut norm_sq = 0.0;
        for i in k..rows {
            norm_sq += a[i * cols + k] * a[i * cols + k];
        }
        let norm = norm_sq.sqrt();
        if norm == 0.0 {
            return Err(Error::RankDeficient);
        }
        let akk = a[k * cols + k];
        let alpha = if akk >= 0.0 { -norm } else { norm };
        // Householder vector v stored in place of column k below the diagonal,
        // with v_k kept separately.
        let vk = akk - alpha;
        let vnorm_sq = norm_sq - akk * akk + vk * vk;
        if vnorm_sq > 0.0 {
            let beta = 2.0 / vnorm_sq;
            for j in (k + 1)..cols {
                let mut dot = vk * a[k * cols + j];
                for i in (k + 1)..rows {
                    dot += a[i * cols + k] * a[i * cols + j];
                }
                let s = beta * dot;
                a[k * cols + j] -= s * vk;
                for i in (k + 1)..rows {
                    a[i * cols + j] -= s * a[i * cols + k];
                }
            }
            for j in 0..nrhs {
                let mut dot = vk * b[k * nrhs + j];
                for i in (k + 1)..rows {
                    dot += a[i * cols + k] * b[i * nrhs + j];
                }
                let s = beta * dot;
                b[k * nrhs + j] -= s * vk;
                for i in (k + 1)..rows {
                    b[i * nrhs + j] -= s * a[i * cols + k];
                }
            }
        }
        a[k * cols + k] = alpha;
    }

    // Relative rank test on the R diagonal.
    let max_diag = (0..cols).map(|k| a[k * cols + k].abs()).fold(0.0, f64::max);
    for k in 0..cols {
        if a[k * cols + k].abs() <= max_diag * 1e-13 {
            return Err(Error::RankDeficient);
        }
    }

    let mut x = vec![0.0; cols * nrhs];
    for j in 0..nrhs {
        for k in (0..cols).rev() {
            let mut s = b[k * nrhs + j];
            for m in (k + 1)..cols {
                s -= a[k * cols + m] * x[m * nrhs + j];
            }
            x[k * nrhs + j] = s / a[k * cols + k];
        }
    }
    Ok(x)
}

/// Eigendecomposition of a symmetric 3x3 matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the matching unit
/// eigenvectors as the rows of the returned matrix.
pub fn sym_eigen3(m: &Mat3) -> ([f64; 3], Mat3) {
    let mut a = m.0;
    let mut v = Mat3::IDENTITY.0;

    for _ in 0..50 {
        let off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        if off < 1e-30 {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            if a[p][q].abs() < 1e-300 {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            for k in 0..3 {
                let akp = a[k][p];
                let akq = a[k][q];
                a[k][p] = c * akp - s * akq;
                a[k][q] = s * akp + c * akq;
            }
            for k in 0..3 {
                let apk = a[p][k];
                let aqk = a[q][k];
                a[p][k] = c * apk - s * aqk;
                a[q][k] = s * apk + c * aqk;
            }
            for k in 0..3 {
                let vkp = v[k][p];
                let vkq = v[k][q];
                v[k][p] = c * vkp - s * vkq;
                v[k][q] = s * vkp + c * vkq;
            }
        }
    }

    let mut pairs: [(f64, usize); 3] = [(a[0][0], 0), (a[1][1], 1), (a[2][2], 2)];
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let vals = [pairs[0].0, pairs[1].0, pairs[2].0];
    let vm = Mat3(v);
    let vecs = Mat3::from_rows(vm.col(pairs[0].1), vm.col(pairs[1].1), vm.col(pairs[2].1));
    (vals, vecs)
}

/// Spectral condition number of a tall matrix (`rows x 3`, row-major),
/// computed as the square-rooted eigenvalue ratio of `A^T A`.
pub fn condition_number_3col(rows: usize, a: &[f64]) -> f64 {
    assert_eq!(a.len(), rows * 3);
    let mut ata = [[0.0f64; 3]; 3];
    for r in 0..rows {
        let row = &a[r * 3..r * 3 + 3];
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    let (vals, _) = sym_eigen3(&Mat3(ata));
    let lo = vals[0].max(0.0);
    let hi = vals[2].max(0.0);
    if lo <= 0.0 {
        f64::INFINITY
    } else {
        (hi / lo).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_follows_right_hand_rule() {
        let c = Vec3::X.cross(Vec3::Y);
        assert!((c - Vec3::Z).norm() < 1e-15);
    }

    #[test]
    fn lstsq_recovers_exact_line() {
        // y = 2 + 3t at t = 0..4
        let ts = [0.0, 1.0, 2.0, 3.0, 4.0];
        let mut a = Vec::new();
        let mut b = Vec::new();
        for &t in &ts {
            a.extend_from_slice(&[1.0, t]);
            b.push(2.0 + 3.0 * t);
        }
        let x = lstsq(5, 2, &a, &b, 1).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-12);
        assert!((x[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn lstsq_minimizes_residual() {
        // Overdetermined inconsistent system; compare against the normal
        // equations solved by hand for a 2-column case.
        let a = [1.0, 0.0, 1.0, 1.0, 1.0, 2.0, 1.0, 3.0];
        let b = [0.1, 0.9, 2.2, 2.8];
        let x = lstsq(4, 2, &a, &b, 1).unwrap();
        // Normal equations: [4 6; 6 14] x = [6.0, 13.7]
        // det = 56 - 36 = 20; x0 = (14*6.0 - 6*13.7)/20, x1 = (4*13.7 - 6*6.0)/20
        let x0 = (14.0 * 6.0 - 6.0 * 13.7) / 20.0;
        let x1 = (4.0 * 13.7 - 6.0 * 6.0) / 20.0;
        assert!((x[0] - x0).abs() < 1e-12, "{} vs {}", x[0], x0);
        assert!((x[1] - x1).abs() < 1e-12);
    }

    #[test]
    fn lstsq_rejects_rank_deficient() {
        // Two identical columns.
        let a = [1.0, 1.0, 2.0, 2.0, 3.0, 3.0];
        let b = [1.0, 2.0, 3.0];
        assert!(matches!(lstsq(3, 2, &a, &b, 1), Err(Error::RankDeficient)));
    }

    #[test]
    fn sym_eigen3_diagonalizes() {
        let m = Mat3([[4.0, 1.0, 0.5], [1.0, 3.0, -0.25], [0.5, -0.25, 2.0]]);
        let (vals, vecs) = sym_eigen3(&m);
        assert!(vals[0] <= vals[1] && vals[1] <= vals[2]);
        for i in 0..3 {
            let v = vecs.row(i);
            let mv = m.mul_vec(v);
            assert!((mv - v * vals[i]).norm() < 1e-10, "eigenpair {i}");
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn condition_number_of_orthonormal_columns_is_one() {
        // Rows of I stacked twice: singular values all sqrt(2).
        let a = [
            1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, //
            1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0,
        ];
        let c = condition_number_3col(6, &a);
        assert!((c - 1.0).abs() < 1e-9, "cond = {c}");
    }
}
