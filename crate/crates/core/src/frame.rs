//! Minimal 3-D rigid-body geometry: vectors, rotation matrices and frames.
//!
//! Rotations are plain row-major 3x3 matrices.  Products are never implicitly
//! re-orthonormalized; [`Rotation::orthonormality_error`] measures drift and
//! [`Rotation::orthonormalized`] repairs it when a caller ingests data from
//! outside (e.g. a config file).

use crate::fmath;
use core::ops::{Add, Mul, Neg, Sub};

/// A coordinate axis, used to name elementary rotations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// A 3-vector (positions in mm, directions unitless).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    #[inline]
    pub fn dot(self, rhs: Vec3) -> f64 {
        self.x * rhs.x + self.y * rhs.y + self.z * rhs.z
    }

    #[inline]
    pub fn cross(self, rhs: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * rhs.z - self.z * rhs.y,
            y: self.z * rhs.x - self.x * rhs.z,
            z: self.x * rhs.y - self.y * rhs.x,
        }
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        fmath::sqrt(self.norm_squared())
    }

    /// Euclidean distance to another point.
    #[inline]
    pub fn distance(self, rhs: Vec3) -> f64 {
        (self - rhs).norm()
    }

    /// Largest absolute component, a cheap max-norm for tolerance checks.
    #[inline]
    pub fn max_abs(self) -> f64 {
        fmath::abs(self.x).max(fmath::abs(self.y)).max(fmath::abs(self.z))
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    #[inline]
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    #[inline]
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    #[inline]
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

/// A 3x3 rotation matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation {
    m: [[f64; 3]; 3],
}

impl Rotation {
    pub const IDENTITY: Rotation = Rotation {
        m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };

    /// Builds a rotation from rows; the caller is responsible for orthonormality.
    #[inline]
    pub const fn from_rows(r0: [f64; 3], r1: [f64; 3], r2: [f64; 3]) -> Self {
        Rotation { m: [r0, r1, r2] }
    }

    /// Entry at `row`, `col` (0-based).
    #[inline]
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.m[row][col]
    }

    /// Elementary rotation about a coordinate axis (right-handed, radians).
    pub fn about_axis(axis: Axis, angle: f64) -> Self {
        let (s, c) = fmath::sin_cos(angle);
        match axis {
            Axis::X => Rotation::from_rows([1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]),
            Axis::Y => Rotation::from_rows([c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]),
            Axis::Z => Rotation::from_rows([c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]),
        }
    }

    /// Intrinsic Z-Y-X Euler angles (yaw `a` about z, then pitch `b` about the
    /// new y, then roll `c` about the new x), the convention used by KUKA
    /// A/B/C angles: `R = Rz(a) * Ry(b) * Rx(c)`.
    pub fn from_euler_zyx(a: f64, b: f64, c: f64) -> Self {
        Rotation::about_axis(Axis::Z, a)
            * Rotation::about_axis(Axis::Y, b)
            * Rotation::about_axis(Axis::X, c)
    }

    /// Rotation from a quaternion in scalar-first order; normalizes the input.
    pub fn from_quaternion(w: f64, x: f64, y: f64, z: f64) -> Self {
        let n = fmath::sqrt(w * w + x * x + y * y + z * z);
        let (w, x, y, z) = (w / n, x / n, y / n, z / n);
        Rotation::from_rows(
            [
                1.0 - 2.0 * (y * y + z * z),
                2.0 * (x * y - w * z),
                2.0 * (x * z + w * y),
            ],
            [
                2.0 * (x * y + w * z),
                1.0 - 2.0 * (x * x + z * z),
                2.0 * (y * z - w * x),
            ],
            [
                2.0 * (x * z - w * y),
                2.0 * (y * z + w * x),
                1.0 - 2.0 * (x * x + y * y),
            ],
        )
    }

    #[inline]
    pub fn transpose(&self) -> Rotation {
        let m = &self.m;
        Rotation::from_rows(
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        )
    }

    /// For a proper rotation the inverse is the transpose.
    #[inline]
    pub fn inverse(&self) -> Rotation {
        self.transpose()
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Max-norm deviation of `R^T R` from the identity plus `|det - 1|`.
    /// Zero for an exact rotation; grows with accumulated round-off.
    pub fn orthonormality_error(&self) -> f64 {
        let g = self.transpose() * *self;
        let mut err: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                err = err.max(fmath::abs(g.m[i][j] - target));
            }
        }
        err.max(fmath::abs(self.determinant() - 1.0))
    }

    /// Nearest-ish rotation via Gram-Schmidt on the rows.  Good enough to
    /// repair round-off or mildly non-orthonormal user input.
    pub fn orthonormalized(&self) -> Rotation {
        let r0 = Vec3::new(self.m[0][0], self.m[0][1], self.m[0][2]);
        let r1 = Vec3::new(self.m[1][0], self.m[1][1], self.m[1][2]);
        let e0 = r0 * (1.0 / r0.norm());
        let r1p = r1 - e0 * r1.dot(e0);
        let e1 = r1p * (1.0 / r1p.norm());
        let e2 = e0.cross(e1);
        Rotation::from_rows([e0.x, e0.y, e0.z], [e1.x, e1.y, e1.z], [e2.x, e2.y, e2.z])
    }

    /// Geodesic angle (radians) between two rotations.
    ///
    /// Uses atan2 of the rotation's axial part against its trace, which keeps
    /// full precision for nearly identical rotations where the acos form
    /// loses half the significant digits.
    pub fn angle_to(&self, other: &Rotation) -> f64 {
        let rel = self.transpose() * *other;
        let trace = rel.m[0][0] + rel.m[1][1] + rel.m[2][2];
        let ax = rel.m[2][1] - rel.m[1][2];
        let ay = rel.m[0][2] - rel.m[2][0];
        let az = rel.m[1][0] - rel.m[0][1];
        let s = 0.5 * fmath::sqrt(ax * ax + ay * ay + az * az);
        fmath::atan2(s, (trace - 1.0) * 0.5)
    }

    /// Column `col` as a vector.
    #[inline]
    pub fn column(&self, col: usize) -> Vec3 {
        Vec3::new(self.m[0][col], self.m[1][col], self.m[2][col])
    }
}

impl Mul for Rotation {
    type Output = Rotation;
    fn mul(self, rhs: Rotation) -> Rotation {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.m[i][0] * rhs.m[0][j]
                    + self.m[i][1] * rhs.m[1][j]
                    + self.m[i][2] * rhs.m[2][j];
            }
        }
        Rotation { m: out }
    }
}

impl Mul<Vec3> for Rotation {
    type Output = Vec3;
    #[inline]
    fn mul(self, v: Vec3) -> Vec3 {
        Vec3::new(
            self.m[0][0] * v.x + self.m[0][1] * v.y + self.m[0][2] * v.z,
            self.m[1][0] * v.x + self.m[1][1] * v.y + self.m[1][2] * v.z,
            self.m[2][0] * v.x + self.m[2][1] * v.y + self.m[2][2] * v.z,
        )
    }
}

/// A rigid-body frame: rotation plus translation, acting as `p -> R p + t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub rotation: Rotation,
    pub position: Vec3,
}

impl Frame {
    pub const IDENTITY: Frame = Frame {
        rotation: Rotation::IDENTITY,
        position: Vec3::ZERO,
    };

    #[inline]
    pub const fn new(rotation: Rotation, position: Vec3) -> Self {
        Frame { rotation, position }
    }

    /// Pure translation.
    #[inline]
    pub const fn translation(position: Vec3) -> Self {
        Frame { rotation: Rotation::IDENTITY, position }
    }

    /// Pure rotation about the origin.
    #[inline]
    pub const fn rotation(rotation: Rotation) -> Self {
        Frame { rotation, position: Vec3::ZERO }
    }

    pub fn inverse(&self) -> Frame {
        let rt = self.rotation.transpose();
        Frame { rotation: rt, position: -(rt * self.position) }
    }

    /// Applies the frame to a point.
    #[inline]
    pub fn transform_point(&self, p: Vec3) -> Vec3 {
        self.rotation * p + self.position
    }
}

/// Frame composition: `(a * b)(p) == a(b(p))`.
impl Mul for Frame {
    type Output = Frame;
    #[inline]
    fn mul(self, rhs: Frame) -> Frame {
        Frame {
            rotation: self.rotation * rhs.rotation,
            position: self.rotation * rhs.position + self.position,
        }
    }
}
