//! Closed-form inverse kinematics of the 6R arm.
//!
//! The wrist centre coincides with the flange origin (rows 5 and 6 carry no
//! offsets), so position and orientation decouple: joints 1-3 place the wrist
//! centre, joints 4-6 realize the remaining rotation.  Up to eight joint
//! vectors solve a generic reachable frame; a [`Configuration`] selects one
//! branch via three bits (shoulder front/behind, elbow up/down, wrist sign).

use crate::fmath;
use crate::frame::{Axis, Frame, Rotation, Vec3};
use crate::robot::{JointVector, RobotModel};
use core::fmt;

/// Shoulder singularity threshold: wrist centre closer than this (mm) to the
/// joint-1 axis leaves q1 undefined.  Far below optimizer step sizes.
pub const SHOULDER_SINGULARITY_TOL_MM: f64 = 1e-7;

/// Wrist singularity threshold on |sin q5|: below it, q4 and q6 rotate about
/// the same axis and only their combination is determined.
pub const WRIST_SINGULARITY_TOL: f64 = 1e-10;

/// Branch selector for the analytic inverse kinematics, an integer 0..=7.
///
/// Bit 0: shoulder — 0 reaches forward over the base (`front`), 1 reaches
/// backward (`behind`).  Bit 1: elbow — 0 keeps `cos q3 >= 0` (`up`), 1 the
/// opposite (`down`).  Bit 2: wrist — 0 selects `q5 >= 0`, 1 selects `q5 < 0`.
/// The all-zero value is the branch containing the zero pose.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Configuration(u8);

impl Configuration {
    /// All eight branches in index order.
    pub const ALL: [Configuration; 8] = [
        Configuration(0),
        Configuration(1),
        Configuration(2),
        Configuration(3),
        Configuration(4),
        Configuration(5),
        Configuration(6),
        Configuration(7),
    ];

    /// Builds from an index in 0..=7.
    pub fn new(s: u8) -> Option<Self> {
        (s < 8).then_some(Configuration(s))
    }

    pub fn from_bits(shoulder_behind: bool, elbow_down: bool, wrist_negative: bool) -> Self {
        Configuration(shoulder_behind as u8 | (elbow_down as u8) << 1 | (wrist_negative as u8) << 2)
    }

    pub fn index(&self) -> u8 {
        self.0
    }

    pub fn shoulder_behind(&self) -> bool {
        self.0 & 1 != 0
    }

    pub fn elbow_down(&self) -> bool {
        self.0 & 2 != 0
    }

    pub fn wrist_negative(&self) -> bool {
        self.0 & 4 != 0
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({}, elbow {}, {})",
            self.0,
            if self.shoulder_behind() { "behind" } else { "front" },
            if self.elbow_down() { "down" } else { "up" },
            if self.wrist_negative() { "q5<0" } else { "q5>=0" },
        )
    }
}

/// Joint-limit check result: per-joint violation depth in rad (0 when inside).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitReport {
    violation: [f64; 6],
    within_limits: bool,
}

impl LimitReport {
    fn new(violation: [f64; 6]) -> Self {
        let within_limits = violation.iter().all(|v| *v == 0.0);
        LimitReport { violation, within_limits }
    }

    pub fn violation(&self) -> &[f64; 6] {
        &self.violation
    }

    pub fn within_limits(&self) -> bool {
        self.within_limits
    }

    /// Largest per-joint violation, rad.
    pub fn max_violation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for v in self.violation {
            worst = worst.max(v);
        }
        worst
    }
}

/// Inverse-kinematics failure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IkError {
    /// Wrist centre outside the hollow-sphere workspace; `defect` is the
    /// radial distance (mm) to the nearest workspace boundary.
    WristUnreachable { defect: f64 },
    /// Wrist centre on the joint-1 axis; q1 undefined.
    SingularShoulder,
    /// |sin q5| below tolerance; q4 and q6 not separable.
    SingularWrist,
}

impl fmt::Display for IkError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IkError::WristUnreachable { defect } => {
                write!(f, "wrist centre outside workspace by {defect} mm")
            }
            IkError::SingularShoulder => write!(f, "shoulder singular: wrist centre on joint-1 axis"),
            IkError::SingularWrist => write!(f, "wrist singular: q5 ~ 0, q4/q6 not separable"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for IkError {}

/// Wrist centre point implied by a TCP target: the flange origin of
/// `tcp_target · tool⁻¹`.
pub fn wrist_point(model: &RobotModel, tcp_target: &Frame) -> Vec3 {
    (*tcp_target * model.tool().inverse()).position
}

pub(crate) struct ArmAngles {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
}

/// Places the wrist centre with joints 1-3 for the given branch.
///
/// With `clamp_reach` the triangle equation is clamped into its valid range
/// instead of erroring — used by the virtual-joint solver, whose adjusted
/// forearm makes the target reachable by construction up to round-off.
pub(crate) fn solve_arm(
    l23: f64,
    l35: f64,
    wrist: Vec3,
    config: Configuration,
    clamp_reach: bool,
) -> Result<ArmAngles, IkError> {
    use core::f64::consts::PI;
    let rho = fmath::hypot(wrist.x, wrist.y);
    if rho < SHOULDER_SINGULARITY_TOL_MM {
        return Err(IkError::SingularShoulder);
    }
    let r_sq = wrist.norm_squared();
    let r = fmath::sqrt(r_sq);
    if !clamp_reach {
        let (r_in, r_out) = (fmath::abs(l23 - l35), l23 + l35);
        if r < r_in {
            return Err(IkError::WristUnreachable { defect: r_in - r });
        }
        if r > r_out {
            return Err(IkError::WristUnreachable { defect: r - r_out });
        }
    }
    // Law of cosines in the arm plane: r² = l23² + l35² − 2·l23·l35·sin q3.
    let sigma = ((l23 * l23 + l35 * l35 - r_sq) / (2.0 * l23 * l35)).clamp(-1.0, 1.0);
    let q3 = if config.elbow_down() {
        fmath::wrap_angle(PI - fmath::asin(sigma))
    } else {
        fmath::asin(sigma)
    };
    let (s3, c3) = fmath::sin_cos(q3);
    // In the arm plane (radial coordinate x̄, height ȳ) the wrist sits at
    // (A·cos q2 − B·sin q2, A·sin q2 + B·cos q2) with:
    let a = l23 - l35 * s3;
    let b = l35 * c3;
    let (q1, x_bar) = if config.shoulder_behind() {
        (fmath::atan2(-wrist.y, -wrist.x), -rho)
    } else {
        (fmath::atan2(wrist.y, wrist.x), rho)
    };
    let y_bar = wrist.z;
    let q2 = fmath::atan2(a * y_bar - b * x_bar, a * x_bar + b * y_bar);
    Ok(ArmAngles { q1, q2, q3 })
}

/// Arm solution when the wrist sits exactly on the reach boundary of the
/// (possibly slack-adjusted) links: the triangle degenerates to a line, both
/// elbow branches merge, and the generic law-of-cosines path would turn
/// round-off into `acos`-amplified angle noise of order `sqrt(ulp)`.  The
/// stretched arm (outer boundary) has `q3 = -pi/2` exactly and the folded arm
/// (inner boundary) `q3 = +pi/2`; `q2` then points straight at the wrist.
pub(crate) fn boundary_arm(
    l23: f64,
    l35: f64,
    wrist: Vec3,
    config: Configuration,
) -> Result<ArmAngles, IkError> {
    use core::f64::consts::FRAC_PI_2;
    let rho = fmath::hypot(wrist.x, wrist.y);
    if rho < SHOULDER_SINGULARITY_TOL_MM {
        return Err(IkError::SingularShoulder);
    }
    // Stretched or folded?  The boundary radii are far apart, so comparing
    // against their midpoint is unambiguous.
    let mid = 0.5 * (l23 + l35 + fmath::abs(l23 - l35));
    let stretched = wrist.norm_squared() >= mid * mid;
    // Radial arm-plane extent a (as in solve_arm, with b = 0 here): the whole
    // chain lies along the line from the shoulder through the wrist, and a
    // negative a (folded with l35 > l23) points it the other way.
    let (q3, a) = if stretched {
        (-FRAC_PI_2, l23 + l35)
    } else {
        (FRAC_PI_2, l23 - l35)
    };
    let (q1, x_bar) = if config.shoulder_behind() {
        (fmath::atan2(-wrist.y, -wrist.x), -rho)
    } else {
        (fmath::atan2(wrist.y, wrist.x), rho)
    };
    let y_bar = wrist.z;
    let q2 = if a >= 0.0 {
        fmath::atan2(y_bar, x_bar)
    } else {
        fmath::atan2(-y_bar, -x_bar)
    };
    Ok(ArmAngles { q1, q2, q3 })
}

/// Rotation of the frame after joints 1-3 (the arm carries no twist about the
/// forearm axis: the chain collapses to `Rz(q1)·Ry(−(q2+q3))`).
pub(crate) fn arm_rotation(q1: f64, q2: f64, q3: f64) -> Rotation {
    Rotation::about_axis(Axis::Z, q1) * Rotation::about_axis(Axis::Y, -(q2 + q3))
}

/// Solves the wrist rotation `W = Rz(q4)·Ry(−q5)·Rz(q6)` for the chosen sign
/// of q5.  With `lenient`, a singular wrist (|sin q5| ~ 0) is resolved by the
/// deterministic convention q4 := 0, q6 := the residual z-rotation.
pub(crate) fn solve_wrist(
    w: &Rotation,
    wrist_negative: bool,
    lenient: bool,
) -> Result<(f64, f64, f64), IkError> {
    let (w13, w23, w33) = (w.at(0, 2), w.at(1, 2), w.at(2, 2));
    let m = fmath::hypot(w13, w23); // = |sin q5|
    if m < WRIST_SINGULARITY_TOL {
        if !lenient {
            return Err(IkError::SingularWrist);
        }
        let q5_mag = fmath::atan2(m, w33); // ~0 or ~pi
        let q5 = if wrist_negative { -q5_mag } else { q5_mag };
        // q4 and q6 only act through their combination; put it all in q6.
        let q6 = fmath::atan2(w.at(1, 0), w.at(1, 1));
        return Ok((0.0, q5, q6));
    }
    if wrist_negative {
        Ok((
            fmath::atan2(w23, w13),
            -fmath::atan2(m, w33),
            fmath::atan2(w.at(2, 1), -w.at(2, 0)),
        ))
    } else {
        Ok((
            fmath::atan2(-w23, -w13),
            fmath::atan2(m, w33),
            fmath::atan2(-w.at(2, 1), w.at(2, 0)),
        ))
    }
}

/// Closed-form inverse kinematics for one branch.  Joint limits are NOT
/// enforced (see [`check_limits`]); the output is wrapped into (−π, π].
pub fn inverse_kinematics(
    model: &RobotModel,
    tcp_target: &Frame,
    config: Configuration,
) -> Result<JointVector, IkError> {
    let flange = *tcp_target * model.tool().inverse();
    let arm = solve_arm(model.l23(), model.l35(), flange.position, config, false)?;
    let w = arm_rotation(arm.q1, arm.q2, arm.q3).transpose() * flange.rotation;
    let (q4, q5, q6) = solve_wrist(&w, config.wrist_negative(), false)?;
    Ok(JointVector([arm.q1, arm.q2, arm.q3, q4, q5, q6]).wrapped())
}

/// The branch a joint vector belongs to.
///
/// Needs the model because the shoulder bit depends on which side of the
/// joint-1 axis the wrist centre lies, a function of the link lengths.
pub fn config_of(model: &RobotModel, q: &JointVector) -> Result<Configuration, IkError> {
    let q5 = fmath::wrap_angle(q.0[4]);
    if fmath::abs(q5) < WRIST_SINGULARITY_TOL {
        return Err(IkError::SingularWrist);
    }
    let c2 = fmath::cos(q.0[1]);
    let s23 = fmath::sin(q.0[1] + q.0[2]);
    // Radial coordinate of the wrist centre in the arm plane; its sign is the
    // shoulder bit, its magnitude the distance to the joint-1 axis.
    let radial = model.l23() * c2 - model.l35() * s23;
    if fmath::abs(radial) < SHOULDER_SINGULARITY_TOL_MM {
        return Err(IkError::SingularShoulder);
    }
    Ok(Configuration::from_bits(
        radial < 0.0,
        fmath::cos(q.0[2]) < 0.0,
        q5 < 0.0,
    ))
}

/// Per-joint limit violations `max(0, q_min − q, q − q_max)` in rad.
pub fn check_limits(model: &RobotModel, q: &JointVector) -> LimitReport {
    let mut violation = [0.0; 6];
    for (i, slot) in violation.iter_mut().enumerate() {
        *slot = (model.q_min()[i] - q.0[i]).max(q.0[i] - model.q_max()[i]).max(0.0);
    }
    LimitReport::new(violation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::robot::{forward_tcp, JointVector, RobotModel};
    use core::f64::consts::{FRAC_PI_2, PI};

    fn offset_tool_model() -> RobotModel {
        RobotModel::default().with_tool(Frame::translation(Vec3::new(150.0, 0.0, 100.0)))
    }

    #[test]
    fn configuration_bits_round_trip() {
        for s in 0..8u8 {
            let c = Configuration::new(s).unwrap();
            assert_eq!(c.index(), s);
            assert_eq!(
                Configuration::from_bits(c.shoulder_behind(), c.elbow_down(), c.wrist_negative()),
                c
            );
        }
        assert!(Configuration::new(8).is_none());
        let canonical = Configuration::from_bits(false, false, false);
        assert_eq!(canonical.index(), 0);
    }

    #[test]
    fn wrist_point_with_identity_tool_is_target_position() {
        let model = RobotModel::default();
        let target = Frame::new(
            Rotation::about_axis(Axis::Y, 0.5),
            Vec3::new(300.0, 100.0, 200.0),
        );
        assert_eq!(wrist_point(&model, &target), target.position);
    }

    #[test]
    fn wrist_point_of_zero_pose() {
        let model = offset_tool_model();
        let target = forward_tcp(&model, &JointVector::ZERO);
        let w = wrist_point(&model, &target);
        assert!((w - Vec3::new(model.l23(), 0.0, model.l35())).max_abs() < 1e-9);
    }

    #[test]
    fn wrist_point_radius_matches_flange_radius() {
        // |wrist_point(forward_tcp(q))| == |forward_flange(q).position| by definition.
        use crate::robot::forward_flange;
        let model = offset_tool_model();
        let mut q = JointVector([0.3, -0.2, 0.7, 1.0, -0.6, 0.4]);
        for k in 0..50 {
            q.0[k % 6] = fmath::wrap_angle(q.0[k % 6] + 0.37 + 0.01 * k as f64);
            let target = forward_tcp(&model, &q);
            let w = wrist_point(&model, &target);
            let f = forward_flange(&model, &q).position;
            assert!((w - f).max_abs() < 1e-9);
        }
    }

    #[test]
    fn roundtrip_on_a_generic_pose_all_branches() {
        let model = offset_tool_model();
        let q = JointVector([0.4, -0.3, 0.8, 1.2, 0.9, -2.1]);
        let target = forward_tcp(&model, &q);
        let s = config_of(&model, &q).unwrap();
        let q_back = inverse_kinematics(&model, &target, s).unwrap();
        assert!(
            q_back.max_angle_distance(&q) < 1e-9,
            "roundtrip drifted by {}",
            q_back.max_angle_distance(&q)
        );
        // Every branch that solves must reproduce the frame.
        let mut distinct = 0;
        for c in Configuration::ALL {
            if let Ok(qs) = inverse_kinematics(&model, &target, c) {
                let f = forward_tcp(&model, &qs);
                assert!((f.position - target.position).max_abs() < 1e-6);
                assert!(f.rotation.angle_to(&target.rotation) < 1e-8);
                assert_eq!(config_of(&model, &qs).unwrap(), c);
                distinct += 1;
            }
        }
        assert_eq!(distinct, 8, "generic reachable pose should have all 8 branches");
    }

    #[test]
    fn unreachable_target_reports_radial_defect() {
        let model = RobotModel::default();
        let r_out = model.l23() + model.l35();
        let target = Frame::new(
            Rotation::about_axis(Axis::X, PI),
            Vec3::new(r_out + 1.0, 0.0, 0.0),
        );
        match inverse_kinematics(&model, &target, Configuration::ALL[0]) {
            Err(IkError::WristUnreachable { defect }) => assert!((defect - 1.0).abs() < 1e-9),
            other => panic!("expected WristUnreachable, got {other:?}"),
        }
    }

    #[test]
    fn target_inside_inner_sphere_is_unreachable() {
        let model = RobotModel::default();
        let target = Frame::new(
            Rotation::about_axis(Axis::X, FRAC_PI_2),
            Vec3::new(20.0, 10.0, 5.0), // radius ~23 < R_in = 35
        );
        assert!(matches!(
            inverse_kinematics(&model, &target, Configuration::ALL[0]),
            Err(IkError::WristUnreachable { .. })
        ));
    }

    #[test]
    fn zero_pose_target_is_wrist_singular() {
        // The q = 0 pose lies on the front/elbow-up branch with q5 = 0.  The
        // behind/elbow-down branch folds the arm around onto the same wrist
        // point with the wrist straight again, so both of those branch pairs
        // (either wrist sign) are singular; the two mixed pairs bend the
        // wrist and stay regular.
        let model = RobotModel::default();
        let target = forward_tcp(&model, &JointVector::ZERO);
        let mut singular = 0;
        let mut regular = 0;
        for c in Configuration::ALL {
            match inverse_kinematics(&model, &target, c) {
                Err(IkError::SingularWrist) => {
                    assert_eq!(
                        c.shoulder_behind(),
                        c.elbow_down(),
                        "only the straight-wrist branch pairs may be singular, got {c}"
                    );
                    singular += 1;
                }
                Ok(qs) => {
                    let f = forward_tcp(&model, &qs);
                    assert!((f.position - target.position).max_abs() < 1e-6);
                    assert!(f.rotation.angle_to(&target.rotation) < 1e-8);
                    regular += 1;
                }
                Err(other) => panic!("unexpected error {other:?} for {c}"),
            }
        }
        assert_eq!(singular, 4, "both straight-wrist branch pairs are singular");
        assert_eq!(regular, 4);
    }

    #[test]
    fn wrist_centre_on_joint1_axis_is_shoulder_singular() {
        let model = RobotModel::default();
        // Wrist straight up: q2 chosen so the radial coordinate vanishes.
        let target = Frame::new(
            Rotation::about_axis(Axis::Y, 0.3),
            Vec3::new(0.0, 0.0, 500.0),
        );
        assert!(matches!(
            inverse_kinematics(&model, &target, Configuration::ALL[0]),
            Err(IkError::SingularShoulder)
        ));
    }

    #[test]
    fn config_of_canonical_pose_is_zero() {
        let model = RobotModel::default();
        // Near the zero pose but with q5 > 0 to stay off the wrist singularity.
        let q = JointVector([0.0, 0.0, 0.0, 0.0, 0.5, 0.0]);
        assert_eq!(config_of(&model, &q).unwrap().index(), 0);
    }

    #[test]
    fn negating_q5_flips_exactly_the_wrist_bit() {
        let model = RobotModel::default();
        let q = JointVector([0.7, -0.4, 1.9, 0.3, 0.8, -0.2]);
        let mut q_neg = q;
        q_neg.0[4] = -q.0[4];
        let a = config_of(&model, &q).unwrap();
        let b = config_of(&model, &q_neg).unwrap();
        assert_eq!(a.index() ^ b.index(), 4);
    }

    #[test]
    fn config_of_rejects_singular_wrist() {
        let model = RobotModel::default();
        let q = JointVector([0.1, 0.2, 0.3, 0.4, 0.0, 0.6]);
        assert_eq!(config_of(&model, &q), Err(IkError::SingularWrist));
    }

    #[test]
    fn limits_zero_pose_is_within() {
        let model = RobotModel::default();
        let rep = check_limits(&model, &JointVector::ZERO);
        assert!(rep.within_limits());
        assert_eq!(rep.max_violation(), 0.0);
    }

    #[test]
    fn limit_violation_depth_is_reported() {
        let model = RobotModel::default();
        let mut q = JointVector::ZERO;
        q.0[0] = model.q_max()[0] + 0.1;
        let rep = check_limits(&model, &q);
        assert!(!rep.within_limits());
        assert!((rep.violation()[0] - 0.1).abs() < 1e-12);
        for v in &rep.violation()[1..] {
            assert_eq!(*v, 0.0);
        }
    }

    #[test]
    fn limit_violations_are_lipschitz_in_q() {
        let model = RobotModel::default();
        let h = 1e-4;
        let mut q = JointVector::ZERO;
        // Sweep q1 across the upper limit and check |Δviolation| <= |Δq|.
        let mut prev = check_limits(&model, &q).violation()[0];
        let start = model.q_max()[0] - 0.01;
        let mut x = start;
        while x < model.q_max()[0] + 0.01 {
            q.0[0] = x;
            let cur = check_limits(&model, &q).violation()[0];
            assert!((cur - prev).abs() <= h * (1.0 + 1e-9));
            prev = cur;
            x += h;
        }
    }
}
