//! Backward transform of the virtual 7-DOF robot.
//!
//! The arm joints alone reach every wrist point inside a hollow sphere with
//! radii `R_in = |l23 − l35|` and `R_out = l23 + l35`.  Inserting a prismatic
//! slack joint along the forearm makes the effective forearm `l35 + v`; the
//! smallest |v| that brings a wrist point within reach is exactly its radial
//! distance to the hollow sphere.  That turns "reachable: yes/no" into a
//! graded measure an optimizer can descend, and [`smoothed_vsq`] is its C²
//! regularization for second-order methods.

use crate::fmath;
use crate::frame::{Frame, Vec3};
use crate::ik::{
    arm_rotation, boundary_arm, check_limits, solve_arm, solve_wrist, Configuration, IkError,
    LimitReport,
};
use crate::robot::{JointVector, RobotModel, VirtualJointVector};

/// Inner and outer radius (mm) of the wrist-point workspace.
pub fn workspace_radii(model: &RobotModel) -> (f64, f64) {
    (
        fmath::abs(model.l23() - model.l35()),
        model.l23() + model.l35(),
    )
}

/// Signed slack value with the smallest |v| such that the wrist point is
/// reachable with forearm length `l35 + v`.
///
/// `|v|` equals `max(0, r − R_out, R_in − r)`, the radial distance to the
/// hollow sphere.  The sign follows from triangle feasibility
/// `|l23 − (l35+v)| ≤ r ≤ l23 + l35 + v`: beyond `R_out` the forearm must
/// lengthen (v > 0); inside `R_in` it must move the inner boundary to `r`,
/// which means lengthening when `l23 ≥ l35` and shortening otherwise.
pub fn virtual_distance(model: &RobotModel, wrist: Vec3) -> f64 {
    let r = wrist.norm();
    let (r_in, r_out) = workspace_radii(model);
    if r > r_out {
        r - r_out
    } else if r < r_in {
        if model.l23() >= model.l35() {
            r_in - r
        } else {
            r - r_in
        }
    } else {
        0.0
    }
}

/// C∞ upper bound of `max(x, 0)`: `(x + √(x² + eps²)) / 2`.
///
/// At eps = 0 this is the exact hinge; for eps > 0 it exceeds the hinge by at
/// most eps/2 (attained at x = 0) and decays like eps²/(4|x|) for x « 0.
pub fn smooth_hinge(x: f64, eps: f64) -> f64 {
    0.5 * (x + fmath::sqrt(x * x + eps * eps))
}

/// Smoothed squared slack: `h(r − R_out)² + h(R_in − r)²` with the hinge
/// width `eps` (mm).  Converges pointwise to `virtual_distance²` as eps → 0
/// and is C² in the wrist point away from r = 0.
pub fn smoothed_vsq(model: &RobotModel, wrist: Vec3, eps: f64) -> f64 {
    let r = wrist.norm();
    let (r_in, r_out) = workspace_radii(model);
    let outer = smooth_hinge(r - r_out, eps);
    let inner = smooth_hinge(r_in - r, eps);
    outer * outer + inner * inner
}

/// A solution of the virtual backward transform.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VirtualSolution {
    /// Joint values `(q1, q2, q3, v, q4, q5, q6)`.
    pub joints: VirtualJointVector,
    /// The prismatic slack, mm (duplicate of `joints.v()` for convenience).
    pub v: f64,
    /// Limit check of the six revolute entries.
    pub limits: LimitReport,
}

impl VirtualSolution {
    /// The six revolute joints.
    pub fn revolute(&self) -> JointVector {
        self.joints.revolute()
    }
}

fn solve(
    model: &RobotModel,
    tcp_target: &Frame,
    config: Configuration,
    lenient_wrist: bool,
) -> Result<VirtualSolution, IkError> {
    let flange = *tcp_target * model.tool().inverse();
    let wrist = flange.position;
    let v = virtual_distance(model, wrist);
    // A nonzero slack puts the wrist exactly on the adjusted reach boundary,
    // where the direct degenerate-triangle construction is well conditioned
    // (the generic path would amplify round-off through acos near ±1).
    // Inside the workspace the generic solve applies; clamping only guards
    // the hair-thin round-off shell at the boundary itself.
    let arm = if v != 0.0 {
        boundary_arm(model.l23(), model.l35() + v, wrist, config)?
    } else {
        solve_arm(model.l23(), model.l35(), wrist, config, true)?
    };
    let w = arm_rotation(arm.q1, arm.q2, arm.q3).transpose() * flange.rotation;
    let (q4, q5, q6) = solve_wrist(&w, config.wrist_negative(), lenient_wrist)?;
    let q = JointVector([arm.q1, arm.q2, arm.q3, q4, q5, q6]).wrapped();
    Ok(VirtualSolution {
        joints: VirtualJointVector::embed(&q, v),
        v,
        limits: check_limits(model, &q),
    })
}

/// Backward transform of the virtual robot: succeeds for every target frame
/// whose wrist point is off the joint-1 axis, however far from the workspace.
///
/// Orientation is solved exactly; position is reproduced by the virtual
/// forward kinematics because only the forearm length changes.  Errors:
/// `SingularShoulder` (wrist point on the joint-1 axis), `SingularWrist`
/// (|sin q5| ~ 0; see [`virtual_inverse_lenient`] for the resolving variant).
pub fn virtual_inverse(
    model: &RobotModel,
    tcp_target: &Frame,
    config: Configuration,
) -> Result<VirtualSolution, IkError> {
    solve(model, tcp_target, config, false)
}

/// Like [`virtual_inverse`] but resolves a singular wrist deterministically
/// (q4 := 0, q6 := residual rotation) instead of erroring.  Used by
/// classification and the objective, where a total answer matters more than
/// branch identity; only `SingularShoulder` remains possible.
pub fn virtual_inverse_lenient(
    model: &RobotModel,
    tcp_target: &Frame,
    config: Configuration,
) -> Result<VirtualSolution, IkError> {
    solve(model, tcp_target, config, true)
}
