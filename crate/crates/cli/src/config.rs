//! Scenario files: a TOML schema describing the robot, the pallet box, the
//! solver knobs and the output paths, plus validated load/save.
//!
//! Angles are accepted in degrees or radians through explicit key suffixes
//! (`q_min_deg` / `q_min_rad`, `rpy_deg` / `rpy_rad`, or a scalar-first
//! `quat`); everything is stored in radians internally.  Unknown keys are
//! rejected, and validation reports every violated rule at once, naming the
//! offending key.

use std::fmt::Write as _;
use std::path::Path;

use gridpick_core::{
    ClassifyMode, Configuration, Frame, GridSpec, RobotModel, Rotation, SweepOptions, Vec3,
    DEFAULT_LIMIT,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default relative output paths used when `[output]` is absent.
pub const DEFAULT_CSV: &str = "report.csv";
pub const DEFAULT_MAP_SVG: &str = "map.svg";
pub const DEFAULT_FIELD_SVG: &str = "field.svg";

/// Default brute-force resolution for the `oracle` subcommand.
pub const DEFAULT_K_ORACLE: usize = 181;

/// A fully validated scenario, all angles in radians, lengths in mm.
#[derive(Clone, Debug)]
pub struct ScenarioConfig {
    pub model: RobotModel,
    pub grid: GridSpec,
    pub sweep: SweepOptions,
    /// Sample count per axis for the brute-force oracle.
    pub k_oracle: usize,
    /// Output paths exactly as written in the file (resolved by the caller
    /// relative to the scenario's directory).
    pub output: OutputPaths,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputPaths {
    pub csv: String,
    pub map_svg: String,
    pub field_svg: String,
}

impl Default for OutputPaths {
    fn default() -> Self {
        OutputPaths {
            csv: DEFAULT_CSV.to_owned(),
            map_svg: DEFAULT_MAP_SVG.to_owned(),
            field_svg: DEFAULT_FIELD_SVG.to_owned(),
        }
    }
}

/// Loading or validation failure.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    /// Syntax or schema error; the message carries line/column and key names.
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    /// Every violated rule, one line each, naming the offending key.
    #[error("invalid scenario:\n{}", .0.join("\n"))]
    Validation(Vec<String>),
}

// ---------------------------------------------------------------------------
// Raw schema (what the TOML file actually contains)
// ---------------------------------------------------------------------------

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    robot: RawRobot,
    #[serde(skip_serializing_if = "Option::is_none")]
    tool: Option<RawTool>,
    #[serde(rename = "box")]
    pallet: RawBox,
    #[serde(skip_serializing_if = "Option::is_none")]
    solver: Option<RawSolver>,
    #[serde(skip_serializing_if = "Option::is_none")]
    output: Option<RawOutput>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawRobot {
    l23: f64,
    l35: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    q_min_deg: Option<[f64; 6]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q_min_rad: Option<[f64; 6]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q_max_deg: Option<[f64; 6]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q_max_rad: Option<[f64; 6]>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawTool {
    #[serde(default)]
    x: f64,
    #[serde(default)]
    y: f64,
    #[serde(default)]
    z: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    rpy_deg: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rpy_rad: Option<[f64; 3]>,
    /// Scalar-first unit quaternion `[w, x, y, z]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    quat: Option<[f64; 4]>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawBox {
    /// Box frame origin in base coordinates, mm.
    position: [f64; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    rpy_deg: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rpy_rad: Option<[f64; 3]>,
    #[serde(rename = "Bx")]
    bx: usize,
    #[serde(rename = "By")]
    by: usize,
    #[serde(rename = "Dx")]
    dx: f64,
    #[serde(rename = "Dy")]
    dy: f64,
    delta_z: f64,
    #[serde(rename = "Q_rel_rpy_deg", skip_serializing_if = "Option::is_none")]
    q_rel_rpy_deg: Option<[f64; 3]>,
    #[serde(rename = "Q_rel_rpy_rad", skip_serializing_if = "Option::is_none")]
    q_rel_rpy_rad: Option<[f64; 3]>,
    #[serde(rename = "Q_rel_quat", skip_serializing_if = "Option::is_none")]
    q_rel_quat: Option<[f64; 4]>,
    /// Inverse-kinematics branch index 0-7.
    #[serde(skip_serializing_if = "Option::is_none")]
    config: Option<u8>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    limit_weight: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    limit_scale: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    length_scale: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid_m: Option<usize>,
    #[serde(rename = "K_oracle", skip_serializing_if = "Option::is_none")]
    k_oracle: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grad_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_iter: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    success_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    v_tol: Option<f64>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    csv: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    map_svg: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    field_svg: Option<String>,
    /// `"full-motion"` (default) or `"start-frame"`.
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<String>,
}

// ---------------------------------------------------------------------------
// Validation helpers
// ---------------------------------------------------------------------------

struct Issues(Vec<String>);

impl Issues {
    fn new() -> Self {
        Issues(Vec::new())
    }

    fn push(&mut self, msg: String) {
        self.0.push(msg);
    }

    fn check_positive(&mut self, key: &str, value: f64) {
        if value <= 0.0 || !value.is_finite() {
            self.push(format!("{key} must be positive, got {value}"));
        }
    }

    fn check_non_negative(&mut self, key: &str, value: f64) {
        if value < 0.0 || !value.is_finite() {
            self.push(format!("{key} must be non-negative, got {value}"));
        }
    }

    fn check_finite(&mut self, key: &str, value: f64) {
        if !value.is_finite() {
            self.push(format!("{key} must be finite, got {value}"));
        }
    }

    fn check_min_count(&mut self, key: &str, value: usize, min: usize) {
        if value < min {
            self.push(format!("{key} must be at least {min}, got {value}"));
        }
    }
}

/// Picks at most one of the listed alternatives; reports a conflict otherwise.
/// Returns the resolved radians (angles already converted), or `None` when no
/// alternative was given.
fn pick_angles<const N: usize>(
    issues: &mut Issues,
    table: &str,
    deg_key: &str,
    deg: Option<[f64; N]>,
    rad_key: &str,
    rad: Option<[f64; N]>,
) -> Option<[f64; N]> {
    match (deg, rad) {
        (Some(_), Some(_)) => {
            issues.push(format!("{table}: give only one of {deg_key} and {rad_key}"));
            None
        }
        (Some(d), None) => Some(d.map(f64::to_radians)),
        (None, Some(r)) => Some(r),
        (None, None) => None,
    }
}

/// Resolves an orientation given as RPY (degrees or radians) or a quaternion.
/// RPY follows the KUKA A/B/C reading: `[roll_x, pitch_y, yaw_z]` applied as
/// `Rz(yaw) * Ry(pitch) * Rx(roll)`.
fn pick_rotation(
    issues: &mut Issues,
    table: &str,
    rpy_deg: Option<[f64; 3]>,
    rpy_rad: Option<[f64; 3]>,
    quat: Option<(&str, [f64; 4])>,
) -> Rotation {
    let given = usize::from(rpy_deg.is_some())
        + usize::from(rpy_rad.is_some())
        + usize::from(quat.is_some());
    if given > 1 {
        issues.push(format!(
            "{table}: give at most one of rpy_deg, rpy_rad and a quaternion"
        ));
        return Rotation::IDENTITY;
    }
    if let Some((key, q)) = quat {
        let norm = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
        if norm <= 1e-12 || !norm.is_finite() {
            issues.push(format!("{table}.{key} must be a non-zero quaternion"));
            return Rotation::IDENTITY;
        }
        return Rotation::from_quaternion(q[0], q[1], q[2], q[3]);
    }
    let rpy = match (rpy_deg, rpy_rad) {
        (Some(d), None) => d.map(f64::to_radians),
        (None, Some(r)) => r,
        _ => return Rotation::IDENTITY,
    };
    for v in rpy {
        if !v.is_finite() {
            issues.push(format!("{table}: RPY angles must be finite"));
            return Rotation::IDENTITY;
        }
    }
    Rotation::from_euler_zyx(rpy[2], rpy[1], rpy[0])
}

fn rotation_quaternion(r: &Rotation) -> [f64; 4] {
    // Shepperd's method: extract through the largest diagonal combination.
    let (m00, m11, m22) = (r.at(0, 0), r.at(1, 1), r.at(2, 2));
    let trace = m00 + m11 + m22;
    let q = if trace > 0.0 {
        let s = (trace + 1.0).sqrt() * 2.0;
        [
            0.25 * s,
            (r.at(2, 1) - r.at(1, 2)) / s,
            (r.at(0, 2) - r.at(2, 0)) / s,
            (r.at(1, 0) - r.at(0, 1)) / s,
        ]
    } else if m00 >= m11 && m00 >= m22 {
        let s = (1.0 + m00 - m11 - m22).sqrt() * 2.0;
        [
            (r.at(2, 1) - r.at(1, 2)) / s,
            0.25 * s,
            (r.at(0, 1) + r.at(1, 0)) / s,
            (r.at(0, 2) + r.at(2, 0)) / s,
        ]
    } else if m11 >= m22 {
        let s = (1.0 + m11 - m00 - m22).sqrt() * 2.0;
        [
            (r.at(0, 2) - r.at(2, 0)) / s,
            (r.at(0, 1) + r.at(1, 0)) / s,
            0.25 * s,
            (r.at(1, 2) + r.at(2, 1)) / s,
        ]
    } else {
        let s = (1.0 + m22 - m00 - m11).sqrt() * 2.0;
        [
            (r.at(1, 0) - r.at(0, 1)) / s,
            (r.at(0, 2) + r.at(2, 0)) / s,
            (r.at(1, 2) + r.at(2, 1)) / s,
            0.25 * s,
        ]
    };
    // Canonical sign: scalar part non-negative.
    if q[0] < 0.0 {
        [-q[0], -q[1], -q[2], -q[3]]
    } else {
        q
    }
}

fn is_identity(r: &Rotation) -> bool {
    *r == Rotation::IDENTITY
}

// ---------------------------------------------------------------------------
// Load / save
// ---------------------------------------------------------------------------

/// Parses and validates a scenario from TOML text.  `origin` labels parse
/// errors (usually the file path).
pub fn parse_config(text: &str, origin: &str) -> Result<ScenarioConfig, ConfigError> {
    let raw: RawScenario = toml::from_str(text).map_err(|e| ConfigError::Parse {
        path: origin.to_owned(),
        message: e.to_string(),
    })?;
    resolve(raw)
}

/// Reads, parses and validates a scenario file.
pub fn load_config(path: &Path) -> Result<ScenarioConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text, &path.display().to_string())
}

/// Writes a scenario back to TOML.  Radian keys and quaternions are used so a
/// following `load_config` reproduces every stored number bit-identically.
pub fn save_config(config: &ScenarioConfig, path: &Path) -> Result<(), ConfigError> {
    let raw = to_raw(config);
    let text = toml::to_string_pretty(&raw).map_err(|e| ConfigError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    std::fs::write(path, text).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn resolve(raw: RawScenario) -> Result<ScenarioConfig, ConfigError> {
    let mut issues = Issues::new();

    // [robot]
    issues.check_positive("robot.l23", raw.robot.l23);
    issues.check_positive("robot.l35", raw.robot.l35);
    let q_min = pick_angles(
        &mut issues,
        "robot",
        "q_min_deg",
        raw.robot.q_min_deg,
        "q_min_rad",
        raw.robot.q_min_rad,
    )
    .unwrap_or([-DEFAULT_LIMIT; 6]);
    let q_max = pick_angles(
        &mut issues,
        "robot",
        "q_max_deg",
        raw.robot.q_max_deg,
        "q_max_rad",
        raw.robot.q_max_rad,
    )
    .unwrap_or([DEFAULT_LIMIT; 6]);
    for j in 0..6 {
        let (lo, hi) = (q_min[j], q_max[j]);
        if !(-core::f64::consts::PI <= lo && lo <= hi && hi <= core::f64::consts::PI) {
            issues.push(format!(
                "robot.q_min/q_max joint {}: need -180 deg <= min <= max <= 180 deg, got [{lo}, {hi}] rad",
                j + 1
            ));
        }
    }

    // [tool]
    let tool = match &raw.tool {
        None => Frame::IDENTITY,
        Some(t) => {
            for (key, v) in [("tool.x", t.x), ("tool.y", t.y), ("tool.z", t.z)] {
                issues.check_finite(key, v);
            }
            let rot = pick_rotation(
                &mut issues,
                "tool",
                t.rpy_deg,
                t.rpy_rad,
                t.quat.map(|q| ("quat", q)),
            );
            Frame::new(rot, Vec3::new(t.x, t.y, t.z))
        }
    };

    // [box]
    let b = &raw.pallet;
    for (i, axis) in ["x", "y", "z"].iter().enumerate() {
        issues.check_finite(&format!("box.position[{axis}]"), b.position[i]);
    }
    let box_rot = pick_rotation(&mut issues, "box", b.rpy_deg, b.rpy_rad, None);
    issues.check_min_count("box.Bx", b.bx, 1);
    issues.check_min_count("box.By", b.by, 1);
    issues.check_positive("box.Dx", b.dx);
    issues.check_positive("box.Dy", b.dy);
    issues.check_finite("box.delta_z", b.delta_z);
    let pick_rot = pick_rotation(
        &mut issues,
        "box",
        b.q_rel_rpy_deg,
        b.q_rel_rpy_rad,
        b.q_rel_quat.map(|q| ("Q_rel_quat", q)),
    );
    let config_index = b.config.unwrap_or(0);
    if config_index > 7 {
        issues.push(format!(
            "box.config must be a branch index 0-7, got {config_index}"
        ));
    }

    // [solver]
    let s = raw.solver.unwrap_or_default();
    let mut sweep = SweepOptions::default();
    if let Some(n) = s.n {
        issues.check_min_count("solver.N", n, 1);
        sweep.steps = n;
    }
    if let Some(eps) = s.eps {
        issues.check_positive("solver.eps", eps);
        sweep.eps = eps;
    }
    if let Some(w) = s.limit_weight {
        issues.check_non_negative("solver.limit_weight", w);
        sweep.limit_weight = w;
    }
    if let Some(c) = s.limit_scale {
        issues.check_positive("solver.limit_scale", c);
        sweep.limit_scale = c;
    }
    if let Some(len) = s.length_scale {
        issues.check_positive("solver.length_scale", len);
        sweep.length_scale = len;
    }
    if let Some(m) = s.grid_m {
        issues.check_min_count("solver.grid_m", m, 1);
        sweep.grid_m = m;
    }
    if let Some(tol) = s.grad_tol {
        issues.check_positive("solver.grad_tol", tol);
        sweep.grad_tol = tol;
    }
    if let Some(iters) = s.max_iter {
        issues.check_min_count("solver.max_iter", iters, 1);
        sweep.max_iter = iters;
    }
    if let Some(tol) = s.success_tol {
        issues.check_non_negative("solver.success_tol", tol);
        sweep.success_tol = Some(tol);
    }
    if let Some(tol) = s.v_tol {
        issues.check_non_negative("solver.v_tol", tol);
        sweep.v_tol = tol;
    }
    let k_oracle = s.k_oracle.unwrap_or(DEFAULT_K_ORACLE);
    issues.check_min_count("solver.K_oracle", k_oracle, 2);

    // [output]
    let o = raw.output.unwrap_or_default();
    let defaults = OutputPaths::default();
    let output = OutputPaths {
        csv: o.csv.unwrap_or(defaults.csv),
        map_svg: o.map_svg.unwrap_or(defaults.map_svg),
        field_svg: o.field_svg.unwrap_or(defaults.field_svg),
    };
    for (key, p) in [
        ("output.csv", &output.csv),
        ("output.map_svg", &output.map_svg),
        ("output.field_svg", &output.field_svg),
    ] {
        if p.is_empty() {
            issues.push(format!("{key} must not be empty"));
        }
    }
    match o.mode.as_deref() {
        None | Some("full-motion") => {}
        Some("start-frame") => sweep.mode = ClassifyMode::StartFrame,
        Some(other) => issues.push(format!(
            "output.mode must be \"full-motion\" or \"start-frame\", got \"{other}\""
        )),
    }

    if !issues.0.is_empty() {
        return Err(ConfigError::Validation(issues.0));
    }

    let model = RobotModel::new(raw.robot.l23, raw.robot.l35, q_min, q_max, tool)
        .map_err(|e| ConfigError::Validation(vec![format!("robot: {e}")]))?;
    let grid = GridSpec {
        frame: Frame::new(box_rot, Vec3::new(b.position[0], b.position[1], b.position[2])),
        bx: b.bx,
        by: b.by,
        dx: b.dx,
        dy: b.dy,
        delta_z: b.delta_z,
        pick_rotation: pick_rot,
        config: Configuration::ALL[config_index as usize],
    };
    grid.validate()
        .map_err(|e| ConfigError::Validation(vec![format!("box: {e:?}")]))?;

    Ok(ScenarioConfig {
        model,
        grid,
        sweep,
        k_oracle,
        output,
    })
}

fn to_raw(config: &ScenarioConfig) -> RawScenario {
    let model = &config.model;
    let tool = model.tool();
    let grid = &config.grid;
    let sweep = &config.sweep;
    RawScenario {
        robot: RawRobot {
            l23: model.l23(),
            l35: model.l35(),
            q_min_rad: Some(*model.q_min()),
            q_max_rad: Some(*model.q_max()),
            ..RawRobot::default()
        },
        tool: Some(RawTool {
            x: tool.position.x,
            y: tool.position.y,
            z: tool.position.z,
            quat: (!is_identity(&tool.rotation)).then(|| rotation_quaternion(&tool.rotation)),
            ..RawTool::default()
        }),
        pallet: RawBox {
            position: [
                grid.frame.position.x,
                grid.frame.position.y,
                grid.frame.position.z,
            ],
            rpy_rad: None,
            rpy_deg: None,
            bx: grid.bx,
            by: grid.by,
            dx: grid.dx,
            dy: grid.dy,
            delta_z: grid.delta_z,
            q_rel_quat: (!is_identity(&grid.pick_rotation))
                .then(|| rotation_quaternion(&grid.pick_rotation)),
            q_rel_rpy_deg: None,
            q_rel_rpy_rad: None,
            config: Some(grid.config.index()),
        },
        solver: Some(RawSolver {
            n: Some(sweep.steps),
            eps: Some(sweep.eps),
            limit_weight: Some(sweep.limit_weight),
            limit_scale: Some(sweep.limit_scale),
            length_scale: Some(sweep.length_scale),
            grid_m: Some(sweep.grid_m),
            k_oracle: Some(config.k_oracle),
            grad_tol: Some(sweep.grad_tol),
            max_iter: Some(sweep.max_iter),
            success_tol: sweep.success_tol,
            v_tol: Some(sweep.v_tol),
        }),
        output: Some(RawOutput {
            csv: Some(config.output.csv.clone()),
            map_svg: Some(config.output.map_svg.clone()),
            field_svg: Some(config.output.field_svg.clone()),
            mode: Some(
                match sweep.mode {
                    ClassifyMode::FullMotion => "full-motion",
                    ClassifyMode::StartFrame => "start-frame",
                }
                .to_owned(),
            ),
        }),
    }
}

/// One rotation saved to TOML for embedding in error messages and the `ik`
/// subcommand output: quaternion plus the equivalent box-frame saved form.
pub fn describe_rotation(r: &Rotation) -> String {
    let q = rotation_quaternion(r);
    let mut out = String::new();
    let _ = write!(
        out,
        "quat [{:.9}, {:.9}, {:.9}, {:.9}]",
        q[0], q[1], q[2], q[3]
    );
    out
}

// The box-frame serialization stores no RPY: identity rotations are dropped
// entirely and anything else becomes a quaternion, keeping the round trip
// free of trigonometric re-derivation.
