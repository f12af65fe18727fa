//! Closed-form 3-vector and 3×3 matrix kernel.
//!
//! Everything here is value-typed and pure. Components are always finite:
//! the checked constructors reject NaN and infinities, and `Vec3::new`
//! panics on them.

use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};

/// Relative singularity floor for [`Mat3::solve_inverse_transpose`].
pub const SINGULAR_FLOOR: f64 = 1e-12;

/// A vector (or point) in 3-space.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(into = "[f64; 3]", try_from = "[f64; 3]")]
pub struct Vec3 {
    x: f64,
    y: f64,
    z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    /// Panics if any component is not finite; use [`Vec3::try_new`] for
    /// untrusted input.
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self::try_new(x, y, z).expect("Vec3 components must be finite")
    }

    pub fn try_new(x: f64, y: f64, z: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() && z.is_finite() {
            Ok(Vec3 { x, y, z })
        } else {
            Err(GeometryError::NonFinite)
        }
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    #[inline]
    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Right-handed cross product.
    #[inline]
    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y).hypot(self.z)
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0).then(|| self * (1.0 / n))
    }

    pub fn distance(self, other: Vec3) -> f64 {
        (self - other).norm()
    }

    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        v.to_array()
    }
}

impl TryFrom<[f64; 3]> for Vec3 {
    type Error = GeometryError;

    fn try_from(a: [f64; 3]) -> Result<Self> {
        Vec3::try_new(a[0], a[1], a[2])
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    #[inline]
    fn add(self, o: Vec3) -> Vec3 {
        Vec3 {
            x: self.x + o.x,
            y: self.y + o.y,
            z: self.z + o.z,
        }
    }
}

impl AddAssign for Vec3 {
    #[inline]
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    #[inline]
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3 {
            x: self.x - o.x,
            y: self.y - o.y,
            z: self.z - o.z,
        }
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    #[inline]
    fn neg(self) -> Vec3 {
        Vec3 {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn mul(self, s: f64) -> Vec3 {
        Vec3 {
            x: self.x * s,
            y: self.y * s,
            z: self.z * s,
        }
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    #[inline]
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl std::iter::Sum for Vec3 {
    fn sum<I: Iterator<Item = Vec3>>(iter: I) -> Vec3 {
        iter.fold(Vec3::ZERO, Add::add)
    }
}

pub fn dot(u: Vec3, v: Vec3) -> f64 {
    u.dot(v)
}

pub fn cross(u: Vec3, v: Vec3) -> Vec3 {
    u.cross(v)
}

/// 3×3 matrix stored by columns. `m[(row, col)]` indexes entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat3 {
    cols: [Vec3; 3],
}

impl Mat3 {
    pub fn from_cols(c0: Vec3, c1: Vec3, c2: Vec3) -> Self {
        Mat3 { cols: [c0, c1, c2] }
    }

    pub fn from_rows(r0: Vec3, r1: Vec3, r2: Vec3) -> Self {
        Mat3::from_cols(r0, r1, r2).transpose()
    }

    pub fn identity() -> Self {
        Mat3::diagonal(1.0, 1.0, 1.0)
    }

    pub fn diagonal(a: f64, b: f64, c: f64) -> Self {
        Mat3::from_cols(
            Vec3::new(a, 0.0, 0.0),
            Vec3::new(0.0, b, 0.0),
            Vec3::new(0.0, 0.0, c),
        )
    }

    #[inline]
    pub fn col(&self, j: usize) -> Vec3 {
        self.cols[j]
    }

    pub fn cols(&self) -> [Vec3; 3] {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec3 {
        Vec3 {
            x: self[(i, 0)],
            y: self[(i, 1)],
            z: self[(i, 2)],
        }
    }

    pub fn transpose(&self) -> Mat3 {
        Mat3::from_cols(self.row(0), self.row(1), self.row(2))
    }

    /// Determinant as the scalar triple product of the columns.
    pub fn det(&self) -> f64 {
        let [a, b, c] = self.cols;
        a.dot(b.cross(c))
    }

    /// Matrix of signed 2×2 minors, so that `cofactor(M)ᵗ · M = det(M) · I`.
    ///
    /// Column `j` of the cofactor matrix is the cross product of the other
    /// two columns of `M`, taken in cyclic order.
    pub fn cofactor(&self) -> Mat3 {
        let [a, b, c] = self.cols;
        Mat3::from_cols(b.cross(c), c.cross(a), a.cross(b))
    }

    pub fn max_col_norm(&self) -> f64 {
        self.cols.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.cols.iter().map(|c| c.max_abs()).fold(0.0, f64::max)
    }

    /// `M⁻ᵗ`, computed as `cofactor(M) / det(M)`.
    ///
    /// Fails with `SingularMatrix` when `|det| ≤ 1e-12 · (max column norm)³`.
    pub fn solve_inverse_transpose(&self) -> Result<Mat3> {
        let det = self.det();
        let floor = SINGULAR_FLOOR * self.max_col_norm().powi(3);
        if !(det.abs() > floor) {
            return Err(GeometryError::SingularMatrix { det, floor });
        }
        Ok(self.cofactor() * (1.0 / det))
    }

    pub fn inverse(&self) -> Result<Mat3> {
        Ok(self.solve_inverse_transpose()?.transpose())
    }

    /// Swaps two columns in place.
    pub fn swap_cols(&mut self, i: usize, j: usize) {
        self.cols.swap(i, j);
    }
}

impl Index<(usize, usize)> for Mat3 {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        let c = &self.cols[j];
        match i {
            0 => &c.x,
            1 => &c.y,
            2 => &c.z,
            _ => panic!("row index {i} out of range"),
        }
    }
}

impl Mul<Vec3> for Mat3 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        self.cols[0] * v.x + self.cols[1] * v.y + self.cols[2] * v.z
    }
}

impl Mul<Mat3> for Mat3 {
    type Output = Mat3;
    fn mul(self, o: Mat3) -> Mat3 {
        Mat3::from_cols(self * o.cols[0], self * o.cols[1], self * o.cols[2])
    }
}

impl Mul<f64> for Mat3 {
    type Output = Mat3;
    fn mul(self, s: f64) -> Mat3 {
        Mat3::from_cols(self.cols[0] * s, self.cols[1] * s, self.cols[2] * s)
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(self, o: Mat3) -> Mat3 {
        Mat3::from_cols(
            self.cols[0] - o.cols[0],
            self.cols[1] - o.cols[1],
            self.cols[2] - o.cols[2],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64, z: f64) -> Vec3 {
        Vec3::new(x, y, z)
    }

    // Explicit entry-by-entry product, independent of the column-based Mul impl.
    fn mul_oracle(a: &Mat3, b: &Mat3) -> [[f64; 3]; 3] {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = (0..3).map(|k| a[(i, k)] * b[(k, j)]).sum();
            }
        }
        out
    }

    // Laplace expansion along the first row.
    fn det_oracle(m: &Mat3) -> f64 {
        m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
            - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
            + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
    }

    fn lcg_matrix(state: &mut u64) -> Mat3 {
        let mut next = || {
            *state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((*state >> 11) as f64 / (1u64 << 53) as f64) * 20.0 - 10.0
        };
        Mat3::from_cols(
            v(next(), next(), next()),
            v(next(), next(), next()),
            v(next(), next(), next()),
        )
    }

    #[test]
    fn dot_examples() {
        assert_eq!(dot(v(1.0, 0.0, 0.0), v(0.0, 1.0, 0.0)), 0.0);
        assert_eq!(dot(v(1.0, 2.0, 3.0), v(1.0, 2.0, 3.0)), 14.0);
        assert_eq!(dot(v(2.0, 0.0, 0.0), v(1.0, 1.0, 1.0)), 2.0);
    }

    #[test]
    fn cross_examples() {
        assert_eq!(cross(v(1.0, 0.0, 0.0), v(0.0, 1.0, 0.0)), v(0.0, 0.0, 1.0));
        let u = v(1.5, -2.0, 7.0);
        assert_eq!(cross(u, u), Vec3::ZERO);
        assert_eq!(
            cross(v(1.0, 2.0, 3.0), v(4.0, 5.0, 6.0)),
            v(-3.0, 6.0, -3.0)
        );
    }

    #[test]
    fn det_examples() {
        assert_eq!(Mat3::identity().det(), 1.0);
        let a = v(1.0, 2.0, 3.0);
        assert_eq!(Mat3::from_cols(a, v(0.0, 1.0, 5.0), a).det(), 0.0);
        let m = Mat3::from_cols(v(1.0, 1.0, 0.0), v(1.0, 0.0, 1.0), v(0.0, 1.0, 1.0));
        assert_eq!(det_oracle(&m), -2.0);
        assert_eq!(m.det(), -2.0);
    }

    #[test]
    fn cofactor_examples() {
        assert_eq!(Mat3::identity().cofactor(), Mat3::identity());
        assert_eq!(
            Mat3::diagonal(2.0, 3.0, 4.0).cofactor(),
            Mat3::diagonal(12.0, 8.0, 6.0)
        );
    }

    #[test]
    fn cofactor_satisfies_cramer_on_random_matrices() {
        let mut s = 7u64;
        for _ in 0..2000 {
            let m = lcg_matrix(&mut s);
            let d = det_oracle(&m);
            let prod = mul_oracle(&m.cofactor().transpose(), &m);
            for (i, row) in prod.iter().enumerate() {
                for (j, &e) in row.iter().enumerate() {
                    let want = if i == j { d } else { 0.0 };
                    assert!((e - want).abs() <= 1e-12 * (1.0 + d.abs()), "{e} vs {want}");
                }
            }
        }
    }

    #[test]
    fn inverse_transpose_examples() {
        assert_eq!(
            Mat3::identity().solve_inverse_transpose().unwrap(),
            Mat3::identity()
        );
        let inv = Mat3::diagonal(2.0, 4.0, 5.0)
            .solve_inverse_transpose()
            .unwrap();
        let want = Mat3::diagonal(0.5, 0.25, 0.2);
        assert!((inv - want).max_abs() < 1e-16);
    }

    #[test]
    fn inverse_transpose_multiplies_back() {
        let mut s = 99u64;
        let mut checked = 0;
        while checked < 1000 {
            let m = lcg_matrix(&mut s);
            // well-conditioned only
            if m.det().abs() < 0.1 * m.max_col_norm().powi(3) {
                continue;
            }
            let it = m.solve_inverse_transpose().unwrap();
            let prod = mul_oracle(&it, &m.transpose());
            for (i, row) in prod.iter().enumerate() {
                for (j, &e) in row.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((e - want).abs() < 1e-12, "{e}");
                }
            }
            checked += 1;
        }
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let a = v(1.0, 2.0, 3.0);
        let m = Mat3::from_cols(a, a * 2.0, v(0.0, 0.0, 1.0));
        assert!(matches!(
            m.solve_inverse_transpose(),
            Err(GeometryError::SingularMatrix { .. })
        ));
        // floor is scale-relative
        let tiny = Mat3::diagonal(1e-9, 1e-9, 1e-9);
        assert!(tiny.solve_inverse_transpose().is_ok());
    }

    #[test]
    fn non_finite_rejected() {
        assert!(Vec3::try_new(f64::NAN, 0.0, 0.0).is_err());
        assert!(Vec3::try_from([0.0, f64::INFINITY, 0.0]).is_err());
    }
}
