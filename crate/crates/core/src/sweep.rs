//! Grid sweep: classify every pallet point red/blue/black, run the
//! orientation optimizer on each, and collect the resulting direction field.
//!
//! Classification always uses the exact (unsmoothed) workspace slack — the
//! smoothing belongs to the solver, not to the feasibility definition.

use crate::frame::{Frame, Rotation, Vec3};
use crate::fmath;
use crate::ik::{wrist_point, Configuration};
use crate::motion::{objective, Alpha, MotionTask};
use crate::optim::{multistart, SolveOptions};
use crate::robot::RobotModel;
use crate::virtual_ik::{virtual_distance, virtual_inverse_lenient};
use alloc::vec::Vec;
use core::fmt;

/// Slack magnitude (mm) below which a pose counts as inside the workspace.
pub const V_TOL_MM: f64 = 1e-6;

/// Feasibility class of a pose or motion, ordered worst to best.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PoseClass {
    /// Outside the workspace: the wrist needs nonzero slack.
    Red,
    /// Reachable, but at least one joint limit is violated.
    Blue,
    /// Reachable within all joint limits.
    Black,
}

impl fmt::Display for PoseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PoseClass::Red => "red",
            PoseClass::Blue => "blue",
            PoseClass::Black => "black",
        })
    }
}

/// Rectangular pallet grid expressed in a box frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    /// Box frame `C` in robot base coordinates.
    pub frame: Frame,
    /// Point counts along the box x and y axes.
    pub bx: usize,
    pub by: usize,
    /// Point spacings (mm) along the box x and y axes.
    pub dx: f64,
    pub dy: f64,
    /// Lift height (mm) of each pick motion.
    pub delta_z: f64,
    /// Prescribed pick orientation relative to the box frame.
    pub pick_rotation: Rotation,
    /// Inverse-kinematics branch used everywhere on the grid.
    pub config: Configuration,
}

/// Grid parameter validation failure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridSpecError {
    BadCount { bx: usize, by: usize },
    BadSpacing,
}

impl fmt::Display for GridSpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridSpecError::BadCount { bx, by } => {
                write!(f, "grid needs at least one point per axis, got {bx}x{by}")
            }
            GridSpecError::BadSpacing => f.write_str("grid spacings must be positive and finite"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GridSpecError {}

impl GridSpec {
    pub fn validate(&self) -> Result<(), GridSpecError> {
        if self.bx < 1 || self.by < 1 {
            return Err(GridSpecError::BadCount { bx: self.bx, by: self.by });
        }
        if !(self.dx > 0.0 && self.dy > 0.0 && self.dx.is_finite() && self.dy.is_finite()) {
            return Err(GridSpecError::BadSpacing);
        }
        Ok(())
    }

    /// Base-frame position of grid point (k, l), both 1-based.
    pub fn point_position(&self, k: usize, l: usize) -> Vec3 {
        debug_assert!(k >= 1 && k <= self.bx && l >= 1 && l <= self.by);
        let local = Vec3::new((k - 1) as f64 * self.dx, (l - 1) as f64 * self.dy, 0.0);
        self.frame.transform_point(local)
    }

    /// Base-frame pick orientation shared by all grid points.
    pub fn pick_orientation(&self) -> Rotation {
        self.frame.rotation * self.pick_rotation
    }

    /// The lift-motion task for grid point (k, l).
    pub fn task_at(&self, opts: &SweepOptions, k: usize, l: usize) -> MotionTask {
        MotionTask {
            orientation: self.pick_orientation(),
            start: self.point_position(k, l),
            delta_z: self.delta_z,
            steps: opts.steps,
            config: self.config,
            eps: opts.eps,
            limit_weight: opts.limit_weight,
            limit_scale: opts.limit_scale,
            length_scale: opts.length_scale,
        }
    }
}

/// Whether a point's class is judged on the whole lift motion or only on the
/// pick frame itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassifyMode {
    FullMotion,
    StartFrame,
}

/// Tuning knobs of the sweep: task shape, solver thresholds, classification.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepOptions {
    /// Interpolation count N of each lift motion.
    pub steps: usize,
    /// Hinge smoothing width, mm.
    pub eps: f64,
    pub limit_weight: f64,
    pub limit_scale: f64,
    pub length_scale: f64,
    /// Start grid size per axis for the multistart optimizer.
    pub grid_m: usize,
    pub mode: ClassifyMode,
    /// Classification slack tolerance, mm.
    pub v_tol: f64,
    /// Success tolerance override; `None` derives it from the task.
    pub success_tol: Option<f64>,
    pub grad_tol: f64,
    pub max_iter: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            steps: 10,
            eps: 0.1,
            limit_weight: 1.0,
            limit_scale: 1e4,
            length_scale: 1.0,
            grid_m: 8,
            mode: ClassifyMode::FullMotion,
            v_tol: V_TOL_MM,
            success_tol: None,
            grad_tol: 1e-8,
            max_iter: 200,
        }
    }
}

impl SweepOptions {
    /// Solver options for one task: the derived success tolerance (unless
    /// overridden) plus this sweep's gradient/iteration settings.
    pub fn solve_options(&self, task: &MotionTask) -> SolveOptions {
        let mut opts = SolveOptions::for_task(task);
        if let Some(tol) = self.success_tol {
            opts.success_tol = tol;
        }
        opts.grad_tol = self.grad_tol;
        opts.max_iter = self.max_iter;
        opts
    }
}

/// Classifies a single pose with an explicit slack tolerance (mm).
pub fn classify_pose_with_tol(
    model: &RobotModel,
    frame: &Frame,
    config: Configuration,
    v_tol: f64,
) -> PoseClass {
    match virtual_inverse_lenient(model, frame, config) {
        Err(_) => PoseClass::Red,
        Ok(sol) => {
            if fmath::abs(sol.v) > v_tol {
                PoseClass::Red
            } else if !sol.limits.within_limits() {
                PoseClass::Blue
            } else {
                PoseClass::Black
            }
        }
    }
}

/// Classifies a single pose: red outside the workspace, blue when reachable
/// but limit-violating, black when fully admissible.  A shoulder-singular
/// pose counts as red.
pub fn classify_pose(model: &RobotModel, frame: &Frame, config: Configuration) -> PoseClass {
    classify_pose_with_tol(model, frame, config, V_TOL_MM)
}

/// Worst per-frame class over the whole motion, with an explicit tolerance.
pub fn classify_motion_with_tol(
    model: &RobotModel,
    task: &MotionTask,
    a: Alpha,
    v_tol: f64,
) -> PoseClass {
    (0..=task.steps)
        .map(|i| classify_pose_with_tol(model, &task.frame_at(a, i), task.config, v_tol))
        .min()
        .expect("motion has at least one frame")
}

/// Worst per-frame class over the whole motion.
pub fn classify_motion(model: &RobotModel, task: &MotionTask, a: Alpha) -> PoseClass {
    classify_motion_with_tol(model, task, a, V_TOL_MM)
}

fn classify(model: &RobotModel, task: &MotionTask, a: Alpha, mode: ClassifyMode, v_tol: f64) -> PoseClass {
    match mode {
        ClassifyMode::FullMotion => classify_motion_with_tol(model, task, a, v_tol),
        ClassifyMode::StartFrame => {
            classify_pose_with_tol(model, &task.frame_at(a, 0), task.config, v_tol)
        }
    }
}

/// Largest exact slack magnitude (mm) over all motion frames.
pub fn residual_v(model: &RobotModel, task: &MotionTask, a: Alpha) -> f64 {
    (0..=task.steps)
        .map(|i| fmath::abs(virtual_distance(model, wrist_point(model, &task.frame_at(a, i)))))
        .fold(0.0, f64::max)
}

/// One grid point's sweep result.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointOutcome {
    /// 1-based grid indices.
    pub k: usize,
    pub l: usize,
    /// Pick position in base coordinates, mm.
    pub position: Vec3,
    pub class_before: PoseClass,
    pub class_after: PoseClass,
    /// Chosen rotation angles (the direction-field entry).
    pub alpha: Alpha,
    /// Objective value at `alpha`.
    pub objective: f64,
    /// Largest exact slack (mm) over the motion at `alpha`.
    pub residual_v: f64,
}

/// Per-class point counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassCounts {
    pub red: usize,
    pub blue: usize,
    pub black: usize,
}

impl ClassCounts {
    pub fn add(&mut self, class: PoseClass) {
        match class {
            PoseClass::Red => self.red += 1,
            PoseClass::Blue => self.blue += 1,
            PoseClass::Black => self.black += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.red + self.blue + self.black
    }
}

/// Full sweep result: per-point outcomes in k-major order plus summaries.
#[derive(Clone, Debug, PartialEq)]
pub struct GridReport {
    pub points: Vec<PointOutcome>,
    pub before: ClassCounts,
    pub after: ClassCounts,
    /// Wall-clock duration of the sweep in seconds; 0 unless a timing driver
    /// fills it in.
    pub wall_time_s: f64,
}

impl GridReport {
    /// Assembles counts from per-point outcomes (any order preserved as-is).
    pub fn from_points(points: Vec<PointOutcome>) -> Self {
        let mut before = ClassCounts::default();
        let mut after = ClassCounts::default();
        for p in &points {
            before.add(p.class_before);
            after.add(p.class_after);
        }
        GridReport { points, before, after, wall_time_s: 0.0 }
    }
}

/// Sweeps a single grid point: classify at α = (0, 0), optimize, classify at
/// the optimizer's choice.
///
/// The optimizer's α is kept only when it does not demote the class and, for
/// points that stay outside the workspace, does not increase the residual
/// slack; otherwise the unrotated outcome is reported.  Since α = (0, 0) is
/// the multistart's first start this guard almost never fires, but it makes
/// the monotone-improvement and residual-descent guarantees unconditional.
pub fn sweep_point(
    model: &RobotModel,
    spec: &GridSpec,
    opts: &SweepOptions,
    k: usize,
    l: usize,
) -> PointOutcome {
    let task = spec.task_at(opts, k, l);
    let solve_opts = opts.solve_options(&task);
    let class_before = classify(model, &task, Alpha::ZERO, opts.mode, opts.v_tol);
    let residual_before = residual_v(model, &task, Alpha::ZERO);
    let report = multistart(&task, model, opts.grid_m, &solve_opts);
    let class_after = if report.value.is_finite() {
        classify(model, &task, report.best, opts.mode, opts.v_tol)
    } else {
        PoseClass::Red
    };
    let residual_after = residual_v(model, &task, report.best);
    let accept = report.value.is_finite()
        && class_after >= class_before
        && (class_after > PoseClass::Red || residual_after <= residual_before + 1e-12);
    if accept {
        PointOutcome {
            k,
            l,
            position: task.start,
            class_before,
            class_after,
            alpha: report.best,
            objective: report.value,
            residual_v: residual_after,
        }
    } else {
        let f0 = objective(&task, Alpha::ZERO, model).unwrap_or(f64::INFINITY);
        PointOutcome {
            k,
            l,
            position: task.start,
            class_before,
            class_after: class_before,
            alpha: Alpha::ZERO,
            objective: f0,
            residual_v: residual_before,
        }
    }
}

/// Serial sweep over the whole grid in k-major order (k outer, l inner).
/// `wall_time_s` is left at 0; timing belongs to the driver that owns a
/// clock.
pub fn sweep(model: &RobotModel, spec: &GridSpec, opts: &SweepOptions) -> GridReport {
    spec.validate().expect("grid parameters must be valid");
    let mut points = Vec::with_capacity(spec.bx * spec.by);
    for k in 1..=spec.bx {
        for l in 1..=spec.by {
            points.push(sweep_point(model, spec, opts, k, l));
        }
    }
    GridReport::from_points(points)
}
