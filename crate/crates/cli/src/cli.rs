//! Command-line front end: argument parsing, subcommand dispatch and exit
//! codes (0 success, 2 configuration error, 3 runtime error).

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gridpick_core::{
    brute_force, multistart, sweep_point, virtual_inverse_lenient, ClassifyMode, Configuration,
    Frame, Rotation, Vec3,
};

use crate::config::{load_config, ConfigError, ScenarioConfig};
use crate::report::write_report_csv;
use crate::runner::run_sweep;
use crate::svg::write_maps_svg;

/// Exit code for configuration problems (bad file, bad values, bad usage).
pub const EXIT_CONFIG: i32 = 2;
/// Exit code for runtime problems (IO failures, solver mismatch, singular
/// queries).
pub const EXIT_RUNTIME: i32 = 3;

/// Largest tolerated excess of the multistart value over the brute-force
/// oracle value.
pub const ORACLE_TOL: f64 = 1e-6;

#[derive(Parser)]
#[command(
    name = "gridpick",
    version,
    about = "Classify pallet pick points of a 6R robot and optimize the free gripper rotation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeFlag {
    /// Judge the whole lift motion (default).
    FullMotion,
    /// Judge only the pick frame.
    StartFrame,
}

#[derive(Args)]
struct SolveFlags {
    /// Classification scope override.
    #[arg(long, value_enum)]
    mode: Option<ModeFlag>,
    /// Drop the joint-limit penalty: minimize exactly the smoothed
    /// slack-square sum.
    #[arg(long)]
    paper_strict: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline: classify and optimize every grid point, then
    /// write the CSV table, class map and direction field.
    Sweep {
        /// Scenario file (TOML).
        config: PathBuf,
        #[command(flatten)]
        flags: SolveFlags,
        /// Worker thread count (default: one per CPU).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Solve a single grid point and print the solver report.
    Point {
        /// Scenario file (TOML).
        config: PathBuf,
        /// 1-based grid column.
        #[arg(short, long)]
        k: usize,
        /// 1-based grid row.
        #[arg(short, long)]
        l: usize,
        #[command(flatten)]
        flags: SolveFlags,
    },
    /// Cross-check the multistart optimizer against a dense brute-force scan
    /// at one grid point.
    Oracle {
        /// Scenario file (TOML).
        config: PathBuf,
        /// 1-based grid column.
        #[arg(short, long)]
        k: usize,
        /// 1-based grid row.
        #[arg(short, long)]
        l: usize,
        #[command(flatten)]
        flags: SolveFlags,
    },
    /// Evaluate one inverse-kinematics query and print the joint vector (with
    /// slack) or a structured error.
    Ik {
        /// Scenario file (TOML); supplies the robot and the default branch.
        config: PathBuf,
        /// Target TCP frame: X Y Z in mm, then roll/pitch/yaw in degrees
        /// (applied as Rz(yaw)·Ry(pitch)·Rx(roll)).
        #[arg(
            long,
            num_args = 6,
            allow_negative_numbers = true,
            value_names = ["X", "Y", "Z", "ROLL_DEG", "PITCH_DEG", "YAW_DEG"]
        )]
        frame: Vec<f64>,
        /// Branch index 0-7 (default: the scenario's branch).
        #[arg(long = "config", value_name = "S")]
        branch: Option<u8>,
    },
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::Runtime(_) => EXIT_RUNTIME,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Runtime(m) => m,
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

/// Parses `args` (including the program name) and runs the selected
/// subcommand, returning the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let outcome = match cli.command {
        Command::Sweep { config, flags, threads } => cmd_sweep(&config, &flags, threads),
        Command::Point { config, k, l, flags } => cmd_point(&config, k, l, &flags),
        Command::Oracle { config, k, l, flags } => cmd_oracle(&config, k, l, &flags),
        Command::Ik { config, frame, branch } => cmd_ik(&config, &frame, branch),
    };
    match outcome {
        Ok(()) => 0,
        Err(failure) => {
            eprintln!("gridpick: {}", failure.message());
            failure.code()
        }
    }
}

fn load(path: &Path, flags: &SolveFlags) -> Result<ScenarioConfig, Failure> {
    let mut scenario = load_config(path)?;
    if let Some(mode) = flags.mode {
        scenario.sweep.mode = match mode {
            ModeFlag::FullMotion => ClassifyMode::FullMotion,
            ModeFlag::StartFrame => ClassifyMode::StartFrame,
        };
    }
    if flags.paper_strict {
        scenario.sweep.limit_weight = 0.0;
    }
    Ok(scenario)
}

/// Output paths are interpreted relative to the scenario file's directory.
fn resolve_output(config_path: &Path, rel: &str) -> PathBuf {
    let p = Path::new(rel);
    if p.is_absolute() {
        p.to_owned()
    } else {
        match config_path.parent() {
            Some(dir) if !dir.as_os_str().is_empty() => dir.join(p),
            _ => p.to_owned(),
        }
    }
}

fn check_grid_index(scenario: &ScenarioConfig, k: usize, l: usize) -> Result<(), Failure> {
    let (bx, by) = (scenario.grid.bx, scenario.grid.by);
    if k < 1 || k > bx || l < 1 || l > by {
        return Err(Failure::Config(format!(
            "grid point ({k}, {l}) outside the 1..={bx} x 1..={by} grid"
        )));
    }
    Ok(())
}

fn cmd_sweep(config_path: &Path, flags: &SolveFlags, threads: Option<usize>) -> Result<(), Failure> {
    let scenario = load(config_path, flags)?;
    let report = run_sweep(&scenario.model, &scenario.grid, &scenario.sweep, threads)
        .map_err(|e| Failure::Runtime(e.to_string()))?;

    let csv = resolve_output(config_path, &scenario.output.csv);
    let map = resolve_output(config_path, &scenario.output.map_svg);
    let field = resolve_output(config_path, &scenario.output.field_svg);
    write_report_csv(&report, &csv).map_err(|e| Failure::Runtime(e.to_string()))?;
    write_maps_svg(&report, &scenario.grid, &map, &field)
        .map_err(|e| Failure::Runtime(e.to_string()))?;

    println!(
        "swept {}x{} grid in {:.3} s",
        scenario.grid.bx, scenario.grid.by, report.wall_time_s
    );
    println!(
        "before: red {} blue {} black {}",
        report.before.red, report.before.blue, report.before.black
    );
    println!(
        "after:  red {} blue {} black {}",
        report.after.red, report.after.blue, report.after.black
    );
    println!(
        "wrote {}, {}, {}",
        csv.display(),
        map.display(),
        field.display()
    );
    Ok(())
}

fn cmd_point(config_path: &Path, k: usize, l: usize, flags: &SolveFlags) -> Result<(), Failure> {
    let scenario = load(config_path, flags)?;
    check_grid_index(&scenario, k, l)?;
    let model = &scenario.model;
    let task = scenario.grid.task_at(&scenario.sweep, k, l);
    let solve_opts = scenario.sweep.solve_options(&task);
    let solver = multistart(&task, model, scenario.sweep.grid_m, &solve_opts);
    let outcome = sweep_point(model, &scenario.grid, &scenario.sweep, k, l);

    println!(
        "point ({k}, {l}) at ({:.3}, {:.3}, {:.3}) mm, branch {}",
        outcome.position.x,
        outcome.position.y,
        outcome.position.z,
        scenario.grid.config.index()
    );
    println!(
        "class: {} -> {}",
        outcome.class_before, outcome.class_after
    );
    println!("alpha = ({:.9}, {:.9}) rad", outcome.alpha.a0(), outcome.alpha.a1());
    println!("objective = {:.6e}", outcome.objective);
    println!("residual_v = {:.6e} mm", outcome.residual_v);
    println!(
        "solver: value {:.6e} at ({:.9}, {:.9}), {} iterations over {} starts, converged = {}",
        solver.value,
        solver.best.a0(),
        solver.best.a1(),
        solver.iterations,
        solver.starts_tried,
        solver.converged
    );
    Ok(())
}

fn cmd_oracle(config_path: &Path, k: usize, l: usize, flags: &SolveFlags) -> Result<(), Failure> {
    let scenario = load(config_path, flags)?;
    check_grid_index(&scenario, k, l)?;
    let model = &scenario.model;
    let task = scenario.grid.task_at(&scenario.sweep, k, l);
    // Disable the early-success exit so both sides minimize all the way down.
    let solve_opts = scenario.sweep.solve_options(&task).with_success_tol(0.0);
    let solver = multistart(&task, model, scenario.sweep.grid_m, &solve_opts);
    let (brute_alpha, brute_value) = brute_force(&task, model, scenario.k_oracle);

    let diff = if !solver.value.is_finite() && !brute_value.is_finite() {
        0.0
    } else {
        solver.value - brute_value
    };
    println!(
        "multistart({}): value {:.9e} at ({:.9}, {:.9})",
        scenario.sweep.grid_m,
        solver.value,
        solver.best.a0(),
        solver.best.a1()
    );
    println!(
        "brute_force({}): value {:.9e} at ({:.9}, {:.9})",
        scenario.k_oracle,
        brute_value,
        brute_alpha.a0(),
        brute_alpha.a1()
    );
    println!("difference = {:.9e}", diff);
    if diff > ORACLE_TOL {
        return Err(Failure::Runtime(format!(
            "multistart value exceeds the brute-force oracle by {diff:.9e} (> {ORACLE_TOL:e})"
        )));
    }
    Ok(())
}

fn cmd_ik(config_path: &Path, frame: &[f64], branch: Option<u8>) -> Result<(), Failure> {
    let scenario = load_config(config_path).map_err(Failure::from)?;
    let [x, y, z, roll_deg, pitch_deg, yaw_deg]: [f64; 6] = frame
        .try_into()
        .map_err(|_| Failure::Config("--frame needs exactly 6 values".to_owned()))?;
    let branch = match branch {
        None => scenario.grid.config,
        Some(s) if s <= 7 => Configuration::ALL[s as usize],
        Some(s) => {
            return Err(Failure::Config(format!(
                "--config must be a branch index 0-7, got {s}"
            )))
        }
    };
    let target = Frame::new(
        Rotation::from_euler_zyx(
            yaw_deg.to_radians(),
            pitch_deg.to_radians(),
            roll_deg.to_radians(),
        ),
        Vec3::new(x, y, z),
    );
    match virtual_inverse_lenient(&scenario.model, &target, branch) {
        Ok(sol) => {
            let q = sol.joints.revolute();
            println!("branch {}", branch.index());
            print!("q_rad = [");
            for (i, qi) in q.0.iter().enumerate() {
                if i > 0 {
                    print!(", ");
                }
                print!("{qi:.9}");
            }
            println!("]");
            println!("v_mm = {:.9}", sol.v);
            println!("within_limits = {}", sol.limits.within_limits());
            if !sol.limits.within_limits() {
                print!("violation_rad = [");
                for (i, vi) in sol.limits.violation().iter().enumerate() {
                    if i > 0 {
                        print!(", ");
                    }
                    print!("{vi:.9}");
                }
                println!("]");
            }
            Ok(())
        }
        Err(e) => Err(Failure::Runtime(format!("inverse kinematics failed: {e}"))),
    }
}
