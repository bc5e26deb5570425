//! Quasi-Newton minimization of the two-angle motion objective, with a
//! multistart driver and a dense grid oracle.
//!
//! The variables live on the torus (−π, π]²; every candidate point is wrapped
//! before evaluation, while curvature information uses the unwrapped step so
//! the secant condition stays meaningful across the seam.

use crate::fmath;
use crate::motion::{gradient, objective, Alpha, MotionTask};
use crate::robot::RobotModel;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use core::fmt;

/// Sufficient-decrease constant of the backtracking line search.
const ARMIJO_C1: f64 = 1e-4;
/// Step shrink factor per backtrack.
const BACKTRACK: f64 = 0.5;
/// Maximum number of shrinks before the line search gives up.
const MAX_BACKTRACKS: u32 = 30;
/// Accepted decreases at or below `STALL_REL · (1 + |f|)` count as stagnant;
/// two consecutive stagnant iterations trigger one curvature reset, two more
/// end the run.  This floors the iteration count near flat minima where the
/// finite-difference gradient is pure rounding noise.
const STALL_REL: f64 = 1e-14;

/// Stopping thresholds for a single descent run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    /// Run ends successfully as soon as the value drops strictly below this.
    /// Use 0 to disable the early success exit and polish to stationarity.
    pub success_tol: f64,
    /// Run ends when the Euclidean gradient norm drops below this.
    pub grad_tol: f64,
    /// Hard cap on descent iterations per start.
    pub max_iter: usize,
}

impl SolveOptions {
    /// Defaults matched to a task: success means beating the smoothing floor
    /// `(N+1)·(eps/length_scale)²` with 1% headroom.
    pub fn for_task(task: &MotionTask) -> Self {
        let ratio = task.eps / task.length_scale;
        let floor = (task.steps + 1) as f64 * ratio * ratio;
        SolveOptions { success_tol: 1.01 * floor, grad_tol: 1e-8, max_iter: 200 }
    }

    pub fn with_success_tol(mut self, tol: f64) -> Self {
        self.success_tol = tol;
        self
    }
}

/// Why a descent run stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// Value dropped below `success_tol`.
    Success,
    /// Gradient norm dropped below `grad_tol`.
    GradientSmall,
    /// Progress stalled at numerical noise level even after a curvature reset.
    Stalled,
    /// Iteration budget exhausted.
    MaxIter,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Termination::Success => "success",
            Termination::GradientSmall => "gradient-small",
            Termination::Stalled => "stalled",
            Termination::MaxIter => "max-iterations",
        };
        f.write_str(s)
    }
}

/// Result of one descent run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinimizeOutcome {
    pub alpha: Alpha,
    pub value: f64,
    pub iterations: usize,
    pub termination: Termination,
}

/// The objective could not be evaluated at the requested start.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveError {
    NonFinite,
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::NonFinite => f.write_str("objective not finite at the starting point"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SolveError {}

/// Best result over all starts of [`multistart`].
#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub best: Alpha,
    pub value: f64,
    /// Total descent iterations summed over all tried starts.
    pub iterations: usize,
    pub starts_tried: usize,
    /// True when the winning run stopped for a quality reason rather than
    /// hitting the iteration cap.
    pub converged: bool,
    /// Final (alpha, value) per tried start, in start order; unevaluable
    /// starts are recorded with an infinite value.
    pub history: Vec<(Alpha, f64)>,
}

fn eval(task: &MotionTask, model: &RobotModel, a: Alpha) -> f64 {
    match objective(task, a, model) {
        Ok(v) if v.is_finite() => v,
        _ => f64::INFINITY,
    }
}

fn grad(task: &MotionTask, model: &RobotModel, a: Alpha) -> Option<[f64; 2]> {
    match gradient(task, a, model) {
        Ok(g) if g[0].is_finite() && g[1].is_finite() => Some(g),
        _ => None,
    }
}

const H_IDENTITY: [[f64; 2]; 2] = [[1.0, 0.0], [0.0, 1.0]];

/// BFGS update of the inverse-Hessian approximation `h` from step `s` and
/// gradient change `y`; skipped unless the curvature `yᵀs` is safely positive.
fn bfgs_update(h: &mut [[f64; 2]; 2], s: [f64; 2], y: [f64; 2]) {
    let ys = y[0] * s[0] + y[1] * s[1];
    // NaN curvature must skip the update too, hence the explicit test.
    if ys.is_nan() || ys <= 1e-12 * (s[0] * s[0] + s[1] * s[1]).max(f64::MIN_POSITIVE) {
        return;
    }
    let rho = 1.0 / ys;
    // a = I − ρ·s·yᵀ;  h ← a·h·aᵀ + ρ·s·sᵀ
    let mut a = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            a[i][j] = if i == j { 1.0 } else { 0.0 } - rho * s[i] * y[j];
        }
    }
    let mut ah = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            ah[i][j] = a[i][0] * h[0][j] + a[i][1] * h[1][j];
        }
    }
    for i in 0..2 {
        for j in 0..2 {
            h[i][j] = ah[i][0] * a[j][0] + ah[i][1] * a[j][1] + rho * s[i] * s[j];
        }
    }
}

/// One quasi-Newton descent from `start`.  The value sequence is monotone
/// non-increasing; evaluation failures away from the start act as +∞ and are
/// rejected by the line search.
pub fn minimize_from(
    task: &MotionTask,
    model: &RobotModel,
    start: Alpha,
    opts: &SolveOptions,
) -> Result<MinimizeOutcome, SolveError> {
    let mut a = Alpha::new(start.a0(), start.a1());
    let mut f = eval(task, model, a);
    if !f.is_finite() {
        return Err(SolveError::NonFinite);
    }
    let done = |alpha, value, iterations, termination| {
        Ok(MinimizeOutcome { alpha, value, iterations, termination })
    };
    if f < opts.success_tol {
        return done(a, f, 0, Termination::Success);
    }
    let mut g = match grad(task, model, a) {
        Some(g) => g,
        None => return done(a, f, 0, Termination::Stalled),
    };
    let mut h = H_IDENTITY;
    let mut stagnant = 0u32;
    let mut restarted = false;
    for iter in 1..=opts.max_iter {
        let gnorm = fmath::hypot(g[0], g[1]);
        if gnorm < opts.grad_tol {
            return done(a, f, iter - 1, Termination::GradientSmall);
        }
        let mut d = [
            -(h[0][0] * g[0] + h[0][1] * g[1]),
            -(h[1][0] * g[0] + h[1][1] * g[1]),
        ];
        let mut gd = g[0] * d[0] + g[1] * d[1];
        if gd >= 0.0 || gd.is_nan() {
            // Curvature model lost positive definiteness; fall back to
            // steepest descent.
            h = H_IDENTITY;
            d = [-g[0], -g[1]];
            gd = -gnorm * gnorm;
        }
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..=MAX_BACKTRACKS {
            let cand = Alpha::new(a.a0() + t * d[0], a.a1() + t * d[1]);
            let fc = eval(task, model, cand);
            if fc <= f + ARMIJO_C1 * t * gd {
                accepted = Some((cand, fc, t));
                break;
            }
            t *= BACKTRACK;
        }
        let stagnant_step = match accepted {
            None => true,
            Some((cand, fc, t)) => {
                debug_assert!(fc <= f, "line search must not increase the value");
                let decrease = f - fc;
                let s = [t * d[0], t * d[1]];
                a = cand;
                f = fc;
                if f < opts.success_tol {
                    return done(a, f, iter, Termination::Success);
                }
                match grad(task, model, a) {
                    None => return done(a, f, iter, Termination::Stalled),
                    Some(gn) => {
                        bfgs_update(&mut h, s, [gn[0] - g[0], gn[1] - g[1]]);
                        g = gn;
                    }
                }
                decrease <= STALL_REL * (1.0 + fmath::abs(f))
            }
        };
        if stagnant_step {
            stagnant += 1;
            if stagnant >= 2 {
                if restarted {
                    return done(a, f, iter, Termination::Stalled);
                }
                restarted = true;
                h = H_IDENTITY;
                stagnant = 0;
            }
        } else {
            stagnant = 0;
        }
    }
    done(a, f, opts.max_iter, Termination::MaxIter)
}

/// The `m` uniform start offsets over (−π, π], beginning with 0.
pub fn start_offsets(m: usize) -> Vec<f64> {
    assert!(m >= 1, "need at least one start offset");
    (0..m)
        .map(|j| fmath::wrap_angle(TAU * j as f64 / m as f64))
        .collect()
}

/// Runs [`minimize_from`] from an `grid_m × grid_m` grid of starts (offset
/// pairs in row-major order, (0, 0) first) and keeps the best final value;
/// exact ties keep the earliest start.  A run that meets `success_tol` ends
/// the search immediately — it is strictly better than every earlier final
/// value, all of which were at or above the tolerance.
pub fn multistart(
    task: &MotionTask,
    model: &RobotModel,
    grid_m: usize,
    opts: &SolveOptions,
) -> SolveReport {
    assert!(grid_m >= 1, "need at least one start");
    let offsets = start_offsets(grid_m);
    let mut history = Vec::with_capacity(grid_m * grid_m);
    let mut best: Option<(Alpha, f64, Termination)> = None;
    let mut iterations = 0;
    'starts: for &o0 in &offsets {
        for &o1 in &offsets {
            let start = Alpha::new(o0, o1);
            match minimize_from(task, model, start, opts) {
                Err(SolveError::NonFinite) => history.push((start, f64::INFINITY)),
                Ok(out) => {
                    iterations += out.iterations;
                    history.push((out.alpha, out.value));
                    let improves = match &best {
                        None => out.value < f64::INFINITY,
                        Some((_, bv, _)) => out.value < *bv,
                    };
                    if improves {
                        best = Some((out.alpha, out.value, out.termination));
                    }
                    if out.termination == Termination::Success {
                        break 'starts;
                    }
                }
            }
        }
    }
    let starts_tried = history.len();
    match best {
        Some((alpha, value, term)) => SolveReport {
            best: alpha,
            value,
            iterations,
            starts_tried,
            converged: term != Termination::MaxIter,
            history,
        },
        None => SolveReport {
            best: Alpha::ZERO,
            value: f64::INFINITY,
            iterations,
            starts_tried,
            converged: false,
            history,
        },
    }
}

/// Exhaustive evaluation on a `k × k` uniform grid over (−π, π]², ascending
/// in α₀ then α₁; returns the grid argmin, ties broken by the smallest
/// (α₀, α₁) pair.  Unevaluable points act as +∞.
pub fn brute_force(task: &MotionTask, model: &RobotModel, k: usize) -> (Alpha, f64) {
    assert!(k >= 2, "grid needs at least two samples per axis");
    let angle = |j: usize| -PI + TAU * (j + 1) as f64 / k as f64;
    let mut best_a = Alpha::new(angle(0), angle(0));
    let mut best_f = f64::INFINITY;
    for j0 in 0..k {
        let a0 = angle(j0);
        for j1 in 0..k {
            let a = Alpha::new(a0, angle(j1));
            let f = eval(task, model, a);
            if f < best_f {
                best_f = f;
                best_a = a;
            }
        }
    }
    (best_a, best_f)
}
