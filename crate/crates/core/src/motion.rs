//! Discretized lift motion and the smoothed reachability objective.
//!
//! A pick at grid position `P0` lifts straight up by `delta_z` while the
//! gripper may rotate freely about its own z-axis.  The free rotation is
//! parameterized by the angles `alpha0` (at the start) and `alpha1` (at the
//! end), interpolated linearly — the same interpolation an industrial
//! controller applies along a linear motion.  The objective sums the smoothed
//! squared workspace slack over all interpolation frames, plus a smoothed
//! joint-limit penalty, yielding a C² function of `(alpha0, alpha1)`.

use crate::frame::{Axis, Frame, Rotation, Vec3};
use crate::ik::{wrist_point, Configuration};
use crate::robot::RobotModel;
use crate::virtual_ik::{smooth_hinge, smoothed_vsq, virtual_inverse_lenient};
use crate::fmath;
use alloc::vec::Vec;
use core::fmt;

/// Step size (rad) for finite-difference derivatives of the objective.
pub const FD_STEP: f64 = 1e-6;

/// The two free rotation angles, each wrapped into (−π, π].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Alpha {
    a0: f64,
    a1: f64,
}

impl Alpha {
    pub const ZERO: Alpha = Alpha { a0: 0.0, a1: 0.0 };

    /// Wraps both angles into (−π, π]; idempotent on values already inside.
    pub fn new(a0: f64, a1: f64) -> Self {
        Alpha { a0: fmath::wrap_angle(a0), a1: fmath::wrap_angle(a1) }
    }

    /// Rotation at the start frame, rad.
    pub fn a0(&self) -> f64 {
        self.a0
    }

    /// Rotation at the end frame, rad.
    pub fn a1(&self) -> f64 {
        self.a1
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.6}, {:.6}) rad", self.a0, self.a1)
    }
}

/// One grid point's lift motion plus the objective's tuning knobs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MotionTask {
    /// Base pick orientation at the grid point (before the free rotation).
    pub orientation: Rotation,
    /// Pick position, mm.
    pub start: Vec3,
    /// Lift height, mm.
    pub delta_z: f64,
    /// Interpolation count N; the motion has N+1 frames.  Must be ≥ 1.
    pub steps: usize,
    /// Inverse-kinematics branch held fixed along the motion.
    pub config: Configuration,
    /// Hinge smoothing width, mm.  Must be > 0.
    pub eps: f64,
    /// Weight of the joint-limit penalty; 0 disables it (and the objective
    /// then needs no inverse kinematics at all).
    pub limit_weight: f64,
    /// Scale (mm²/rad²) converting squared limit violations into the same
    /// dimensionless magnitude as squared millimetre slacks.
    pub limit_scale: f64,
    /// Length normalization (mm) dividing the slack term.
    pub length_scale: f64,
}

impl MotionTask {
    /// A task with the default knobs: N = 10, eps = 0.1 mm, limit weight 1,
    /// limit scale 1e4 mm²/rad², unit length scale.
    pub fn new(orientation: Rotation, start: Vec3, delta_z: f64, config: Configuration) -> Self {
        MotionTask {
            orientation,
            start,
            delta_z,
            steps: 10,
            config,
            eps: 0.1,
            limit_weight: 1.0,
            limit_scale: 1e4,
            length_scale: 1.0,
        }
    }

    /// Smoothing width for the rad-valued limit hinges, chosen so a limit
    /// hinge at its kink contributes the same dimensionless floor as a slack
    /// hinge at its kink.
    pub fn eps_rad(&self) -> f64 {
        self.eps / fmath::sqrt(self.limit_scale)
    }

    /// The frame at interpolation index `i` (0 ..= steps).
    pub fn frame_at(&self, a: Alpha, i: usize) -> Frame {
        let lambda = i as f64 / self.steps as f64;
        let angle = a.a0() + lambda * (a.a1() - a.a0());
        Frame::new(
            self.orientation * Rotation::about_axis(Axis::Z, angle),
            self.start + Vec3::new(0.0, 0.0, lambda * self.delta_z),
        )
    }
}

/// All N+1 frames of the motion, start to end.
pub fn motion_frames(task: &MotionTask, a: Alpha) -> Vec<Frame> {
    (0..=task.steps).map(|i| task.frame_at(a, i)).collect()
}

/// Objective evaluation failure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ObjectiveError {
    /// The wrist point of one motion frame lies on the joint-1 axis.
    SingularShoulder { frame: usize },
}

impl fmt::Display for ObjectiveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectiveError::SingularShoulder { frame } => {
                write!(f, "shoulder singular at motion frame {frame}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ObjectiveError {}

/// Smoothed objective: `½ Σᵢ smoothed_vsq(wristᵢ)/length_scale²` plus
/// `limit_weight · limit_scale/length_scale² · Σᵢⱼ h(limit margins)²`.
///
/// With `limit_weight = 0` this is exactly the smoothed sum of squared
/// slacks, total for every α.  With a positive weight, each frame is solved
/// by the virtual backward transform (lenient wrist) and both signed limit
/// margins of every revolute joint pass through the same hinge smoother in
/// rad, so the penalty stays C² and converges to the squared violation depth.
pub fn objective(task: &MotionTask, a: Alpha, model: &RobotModel) -> Result<f64, ObjectiveError> {
    debug_assert!(task.steps >= 1, "need at least one interpolation step");
    debug_assert!(task.eps > 0.0, "smoothing width must be positive");
    let eps_rad = task.eps_rad();
    let inv_len_sq = 1.0 / (task.length_scale * task.length_scale);
    let mut slack_sum = 0.0;
    let mut limit_sum = 0.0;
    for i in 0..=task.steps {
        let frame = task.frame_at(a, i);
        slack_sum += smoothed_vsq(model, wrist_point(model, &frame), task.eps);
        if task.limit_weight > 0.0 {
            let sol = virtual_inverse_lenient(model, &frame, task.config)
                .map_err(|_| ObjectiveError::SingularShoulder { frame: i })?;
            let q = sol.revolute();
            for j in 0..6 {
                let lo = smooth_hinge(model.q_min()[j] - q.0[j], eps_rad);
                let hi = smooth_hinge(q.0[j] - model.q_max()[j], eps_rad);
                limit_sum += lo * lo + hi * hi;
            }
        }
    }
    Ok(0.5 * slack_sum * inv_len_sq + task.limit_weight * task.limit_scale * limit_sum * inv_len_sq)
}

/// Central finite-difference gradient of [`objective`] with step [`FD_STEP`].
pub fn gradient(task: &MotionTask, a: Alpha, model: &RobotModel) -> Result<[f64; 2], ObjectiveError> {
    let h = FD_STEP;
    let fp0 = objective(task, Alpha::new(a.a0() + h, a.a1()), model)?;
    let fm0 = objective(task, Alpha::new(a.a0() - h, a.a1()), model)?;
    let fp1 = objective(task, Alpha::new(a.a0(), a.a1() + h), model)?;
    let fm1 = objective(task, Alpha::new(a.a0(), a.a1() - h), model)?;
    Ok([(fp0 - fm0) / (2.0 * h), (fp1 - fm1) / (2.0 * h)])
}
