//! Robot model: DH parameter rows, joint vectors and forward kinematics for
//! the 6R arm and its 7-DOF virtual extension.
//!
//! The joint chain is the classic central-wrist layout: two links of length
//! `l23` (upper arm, along x of frame 2) and `l35` (forearm, along z of frame
//! 4), with joints 4-6 intersecting in one point (the wrist centre).  The
//! virtual robot inserts an unbounded prismatic joint between joints 3 and 4
//! whose translation axis is the forearm axis, so a slack value `v` acts
//! exactly like lengthening the forearm to `l35 + v`.

use crate::fmath;
use crate::frame::{Frame, Rotation, Vec3};
use core::fmt;

/// How a DH row consumes its joint variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JointType {
    /// Joint variable adds to the rotation angle `theta`.
    Revolute,
    /// Joint variable adds to the offset `d` (mm).
    Prismatic,
}

/// One Denavit-Hartenberg row: `A(q) = Rz(theta)·Tz(d)·Tx(a)·Rx(alpha)` with
/// the joint value added to `theta` (revolute) or `d` (prismatic).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DHRow {
    pub theta_offset: f64,
    pub d: f64,
    pub a: f64,
    pub alpha: f64,
    pub joint_type: JointType,
}

impl DHRow {
    pub const fn revolute(theta_offset: f64, d: f64, a: f64, alpha: f64) -> Self {
        DHRow { theta_offset, d, a, alpha, joint_type: JointType::Revolute }
    }

    pub const fn prismatic(theta_offset: f64, d: f64, a: f64, alpha: f64) -> Self {
        DHRow { theta_offset, d, a, alpha, joint_type: JointType::Prismatic }
    }
}

/// Evaluates one DH row at a joint value (rad for revolute, mm for prismatic).
///
/// Closed form of `Rz(θ)·Tz(d)·Tx(a)·Rx(α)`: rotation `Rz(θ)·Rx(α)`,
/// position `(a·cosθ, a·sinθ, d)`.
pub fn dh_transform(row: &DHRow, joint_value: f64) -> Frame {
    let (theta, d) = match row.joint_type {
        JointType::Revolute => (row.theta_offset + joint_value, row.d),
        JointType::Prismatic => (row.theta_offset, row.d + joint_value),
    };
    let (st, ct) = fmath::sin_cos(theta);
    let (sa, ca) = fmath::sin_cos(row.alpha);
    Frame::new(
        Rotation::from_rows(
            [ct, -st * ca, st * sa],
            [st, ct * ca, -ct * sa],
            [0.0, sa, ca],
        ),
        Vec3::new(row.a * ct, row.a * st, d),
    )
}

/// Joint angles of the 6R robot, radians.  Forward kinematics accepts any
/// finite values; inverse kinematics produces components wrapped to (−π, π].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JointVector(pub [f64; 6]);

impl JointVector {
    pub const ZERO: JointVector = JointVector([0.0; 6]);

    /// Componentwise wrap into (−π, π]; idempotent.
    pub fn wrapped(&self) -> JointVector {
        let mut q = self.0;
        for qi in &mut q {
            *qi = fmath::wrap_angle(*qi);
        }
        JointVector(q)
    }

    /// Largest absolute componentwise difference after wrapping both sides,
    /// measured along the circle (so π and −π+1e-12 are close).
    pub fn max_angle_distance(&self, other: &JointVector) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..6 {
            worst = worst.max(fmath::abs(fmath::wrap_angle(self.0[i] - other.0[i])));
        }
        worst
    }
}

/// Joint values of the virtual robot: `(q1, q2, q3, v, q4, q5, q6)` with the
/// prismatic slack `v` in mm at index 3.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VirtualJointVector(pub [f64; 7]);

impl VirtualJointVector {
    /// Inserts a slack value into a 6R joint vector.
    pub fn embed(q: &JointVector, v: f64) -> Self {
        let q = q.0;
        VirtualJointVector([q[0], q[1], q[2], v, q[3], q[4], q[5]])
    }

    /// The prismatic slack entry, mm.
    pub fn v(&self) -> f64 {
        self.0[3]
    }

    /// Drops the slack entry, returning the revolute joints.
    pub fn revolute(&self) -> JointVector {
        let q = self.0;
        JointVector([q[0], q[1], q[2], q[4], q[5], q[6]])
    }
}

/// Model validation failure.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelError {
    /// A link length was zero or negative (mm value attached).
    NonPositiveLink { name: &'static str, value: f64 },
    /// Joint limit pair out of order or outside [−π, π].
    BadJointLimit { joint: usize, min: f64, max: f64 },
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::NonPositiveLink { name, value } => {
                write!(f, "link length {name} must be positive, got {value} mm")
            }
            ModelError::BadJointLimit { joint, min, max } => {
                write!(
                    f,
                    "joint {} limits invalid: need -pi <= min <= max <= pi, got [{min}, {max}] rad",
                    joint + 1
                )
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ModelError {}

/// The 6R robot: link lengths, joint limits and tool transform.
///
/// `dh()` exposes the six DH rows; `virtual_dh()` the seven rows of the
/// extended robot with the prismatic slack joint between rows 3 and 4.
#[derive(Clone, Debug, PartialEq)]
pub struct RobotModel {
    l23: f64,
    l35: f64,
    q_min: [f64; 6],
    q_max: [f64; 6],
    tool: Frame,
}

/// Default symmetric joint limits: ±0.95·π on every joint.
pub const DEFAULT_LIMIT: f64 = 0.95 * core::f64::consts::PI;

impl RobotModel {
    /// Validates and builds a model.  Lengths in mm, limits in rad.
    pub fn new(
        l23: f64,
        l35: f64,
        q_min: [f64; 6],
        q_max: [f64; 6],
        tool: Frame,
    ) -> Result<Self, ModelError> {
        use core::f64::consts::PI;
        if l23 <= 0.0 || !l23.is_finite() {
            return Err(ModelError::NonPositiveLink { name: "l23", value: l23 });
        }
        if l35 <= 0.0 || !l35.is_finite() {
            return Err(ModelError::NonPositiveLink { name: "l35", value: l35 });
        }
        for i in 0..6 {
            let (lo, hi) = (q_min[i], q_max[i]);
            if !(-PI <= lo && lo <= hi && hi <= PI) {
                return Err(ModelError::BadJointLimit { joint: i, min: lo, max: hi });
            }
        }
        Ok(RobotModel { l23, l35, q_min, q_max, tool })
    }

    /// Upper-arm length, mm.
    pub fn l23(&self) -> f64 {
        self.l23
    }

    /// Forearm length, mm.
    pub fn l35(&self) -> f64 {
        self.l35
    }

    pub fn q_min(&self) -> &[f64; 6] {
        &self.q_min
    }

    pub fn q_max(&self) -> &[f64; 6] {
        &self.q_max
    }

    pub fn tool(&self) -> &Frame {
        &self.tool
    }

    /// Returns a copy with a different tool transform.
    pub fn with_tool(&self, tool: Frame) -> Self {
        RobotModel { tool, ..self.clone() }
    }

    /// The six DH rows of the arm.
    pub fn dh(&self) -> [DHRow; 6] {
        use core::f64::consts::FRAC_PI_2;
        [
            DHRow::revolute(0.0, 0.0, 0.0, FRAC_PI_2),
            DHRow::revolute(0.0, 0.0, self.l23, 0.0),
            DHRow::revolute(0.0, 0.0, 0.0, -FRAC_PI_2),
            DHRow::revolute(0.0, self.l35, 0.0, FRAC_PI_2),
            DHRow::revolute(0.0, 0.0, 0.0, -FRAC_PI_2),
            DHRow::revolute(0.0, 0.0, 0.0, 0.0),
        ]
    }

    /// The seven DH rows of the virtual robot: the prismatic slack joint sits
    /// between the original rows 3 and 4 and translates along the forearm z.
    pub fn virtual_dh(&self) -> [DHRow; 7] {
        let dh = self.dh();
        [
            dh[0],
            dh[1],
            dh[2],
            DHRow::prismatic(0.0, 0.0, 0.0, 0.0),
            dh[3],
            dh[4],
            dh[5],
        ]
    }
}

impl Default for RobotModel {
    /// 455/420 mm links, ±0.95π limits, identity tool.
    fn default() -> Self {
        RobotModel::new(
            455.0,
            420.0,
            [-DEFAULT_LIMIT; 6],
            [DEFAULT_LIMIT; 6],
            Frame::IDENTITY,
        )
        .expect("default model is valid")
    }
}

/// Forward kinematics to the flange (frame after joint 6, tool not applied).
/// Because rows 5 and 6 carry no offsets, this frame's origin is also the
/// wrist centre point.
pub fn forward_flange(model: &RobotModel, q: &JointVector) -> Frame {
    let mut f = Frame::IDENTITY;
    for (row, qi) in model.dh().iter().zip(q.0.iter()) {
        f = f * dh_transform(row, *qi);
    }
    f
}

/// Forward kinematics to the tool centre point: flange composed with the tool.
pub fn forward_tcp(model: &RobotModel, q: &JointVector) -> Frame {
    forward_flange(model, q) * *model.tool()
}

/// Forward kinematics of the 7-DOF virtual robot (tool applied).
pub fn forward_virtual(model: &RobotModel, qv: &VirtualJointVector) -> Frame {
    let mut f = Frame::IDENTITY;
    for (row, qi) in model.virtual_dh().iter().zip(qv.0.iter()) {
        f = f * dh_transform(row, *qi);
    }
    f * *model.tool()
}
