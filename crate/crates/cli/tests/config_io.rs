//! Scenario-file behavior: defaults, unit suffixes, rejection of unknown or
//! invalid keys, and bit-identical save/load round trips.

use gridpick::config::{load_config, parse_config, save_config, ConfigError};
use gridpick_core::{ClassifyMode, DEFAULT_LIMIT};

const MINIMAL: &str = r#"
[robot]
l23 = 455.0
l35 = 420.0

[box]
position = [600.0, 0.0, -200.0]
Bx = 4
By = 3
Dx = 50.0
Dy = 40.0
delta_z = 100.0
"#;

#[test]
fn minimal_config_gets_solver_defaults() {
    let cfg = parse_config(MINIMAL, "minimal").expect("minimal config must load");
    assert_eq!(cfg.sweep.steps, 10);
    assert_eq!(cfg.sweep.eps, 0.1);
    assert_eq!(cfg.sweep.grid_m, 8);
    assert_eq!(cfg.sweep.limit_weight, 1.0);
    assert_eq!(cfg.sweep.mode, ClassifyMode::FullMotion);
    assert_eq!(cfg.k_oracle, 181);
    assert_eq!(cfg.model.q_min(), &[-DEFAULT_LIMIT; 6]);
    assert_eq!(cfg.model.q_max(), &[DEFAULT_LIMIT; 6]);
    assert_eq!(cfg.model.tool(), &gridpick_core::Frame::IDENTITY);
    assert_eq!(cfg.grid.config.index(), 0);
    assert_eq!(cfg.output.csv, "report.csv");
    assert_eq!(cfg.output.map_svg, "map.svg");
    assert_eq!(cfg.output.field_svg, "field.svg");
}

#[test]
fn degree_keys_are_converted_to_radians() {
    let text = r#"
[robot]
l23 = 455.0
l35 = 420.0
q_min_deg = [-171.0, -171.0, -171.0, -171.0, -171.0, -171.0]
q_max_deg = [171.0, 171.0, 171.0, 171.0, 171.0, 171.0]

[tool]
x = 150.0
z = 100.0
rpy_deg = [180.0, 0.0, 0.0]

[box]
position = [600.0, 0.0, -200.0]
rpy_deg = [0.0, 0.0, 90.0]
Bx = 2
By = 2
Dx = 10.0
Dy = 10.0
delta_z = 50.0
Q_rel_rpy_deg = [180.0, 0.0, 0.0]
config = 4
"#;
    let cfg = parse_config(text, "deg").unwrap();
    assert!((cfg.model.q_min()[0] - (-171.0_f64).to_radians()).abs() < 1e-15);
    assert!((cfg.model.q_max()[5] - 171.0_f64.to_radians()).abs() < 1e-15);
    // tool RPY [180, 0, 0] turns the tool z-axis onto -z.
    let tz = cfg.model.tool().rotation.column(2);
    assert!((tz.z + 1.0).abs() < 1e-12);
    // box yaw 90 deg maps the box x-axis onto base +y.
    let bx = cfg.grid.frame.rotation.column(0);
    assert!((bx.y - 1.0).abs() < 1e-12, "box x-axis {bx:?}");
    assert_eq!(cfg.grid.config.index(), 4);
}

#[test]
fn tool_translation_round_trips_bit_identically() {
    let text = r#"
[robot]
l23 = 455.0
l35 = 420.0

[tool]
x = 150.0
y = 0.0
z = 100.0

[box]
position = [-1040.0, -216.0, -48.0]
Bx = 25
By = 25
Dx = 18.0
Dy = 18.0
delta_z = 100.0
Q_rel_rpy_deg = [180.0, 0.0, 0.0]
config = 1

[solver]
N = 10
eps = 0.1
grid_m = 8
"#;
    let cfg = parse_config(text, "orig").unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("saved.toml");
    save_config(&cfg, &path).unwrap();
    let reloaded = load_config(&path).unwrap();

    // Every number that defines the computation must survive exactly.
    assert_eq!(reloaded.model.l23().to_bits(), cfg.model.l23().to_bits());
    assert_eq!(reloaded.model.l35().to_bits(), cfg.model.l35().to_bits());
    for j in 0..6 {
        assert_eq!(
            reloaded.model.q_min()[j].to_bits(),
            cfg.model.q_min()[j].to_bits()
        );
        assert_eq!(
            reloaded.model.q_max()[j].to_bits(),
            cfg.model.q_max()[j].to_bits()
        );
    }
    let (t0, t1) = (cfg.model.tool(), reloaded.model.tool());
    assert_eq!(t0.position.x.to_bits(), t1.position.x.to_bits());
    assert_eq!(t0.position.y.to_bits(), t1.position.y.to_bits());
    assert_eq!(t0.position.z.to_bits(), t1.position.z.to_bits());
    assert_eq!(cfg.grid.frame.position.x.to_bits(), reloaded.grid.frame.position.x.to_bits());
    assert_eq!(cfg.grid.dx.to_bits(), reloaded.grid.dx.to_bits());
    assert_eq!(cfg.grid.delta_z.to_bits(), reloaded.grid.delta_z.to_bits());
    assert_eq!(cfg.sweep.eps.to_bits(), reloaded.sweep.eps.to_bits());
    assert_eq!(cfg.grid.config, reloaded.grid.config);
    // The pick rotation is an exact half-turn; the quaternion form is exact.
    assert!(cfg
        .grid
        .pick_rotation
        .angle_to(&reloaded.grid.pick_rotation)
        .abs()
        < 1e-15);

    // Saving the reloaded scenario reproduces the file byte for byte.
    let path2 = dir.path().join("saved2.toml");
    save_config(&reloaded, &path2).unwrap();
    assert_eq!(
        std::fs::read(&path).unwrap(),
        std::fs::read(&path2).unwrap()
    );
}

#[test]
fn unknown_keys_are_rejected() {
    let text = format!("{MINIMAL}\n[solver]\nspeed = 3.0\n");
    match parse_config(&text, "unknown") {
        Err(ConfigError::Parse { message, .. }) => {
            assert!(message.contains("speed"), "message: {message}");
        }
        other => panic!("expected parse error, got {other:?}"),
    }
    let text = MINIMAL.replace("delta_z", "lift_height");
    assert!(parse_config(&text, "unknown2").is_err());
}

#[test]
fn negative_spacing_names_the_key() {
    let text = MINIMAL.replace("Dx = 50.0", "Dx = -50.0");
    match parse_config(&text, "neg") {
        Err(ConfigError::Validation(issues)) => {
            assert!(
                issues.iter().any(|m| m.contains("box.Dx")),
                "issues: {issues:?}"
            );
        }
        other => panic!("expected validation error, got {other:?}"),
    }
}

#[test]
fn every_violation_is_listed_at_once() {
    let text = r#"
[robot]
l23 = -455.0
l35 = 420.0

[box]
position = [600.0, 0.0, -200.0]
Bx = 0
By = 3
Dx = -50.0
Dy = 40.0
delta_z = 100.0
config = 9

[solver]
N = 0
eps = -0.1
"#;
    match parse_config(text, "multi") {
        Err(ConfigError::Validation(issues)) => {
            for key in ["robot.l23", "box.Bx", "box.Dx", "box.config", "solver.N", "solver.eps"] {
                assert!(
                    issues.iter().any(|m| m.contains(key)),
                    "missing {key} in {issues:?}"
                );
            }
        }
        other => panic!("expected validation error, got {other:?}"),
    }
}

#[test]
fn conflicting_unit_suffixes_are_rejected() {
    let text = format!(
        "{MINIMAL}\n[tool]\nrpy_deg = [1.0, 0.0, 0.0]\nrpy_rad = [0.1, 0.0, 0.0]\n"
    );
    match parse_config(&text, "conflict") {
        Err(ConfigError::Validation(issues)) => {
            assert!(issues.iter().any(|m| m.contains("tool")), "{issues:?}");
        }
        other => panic!("expected validation error, got {other:?}"),
    }

    let mut both = MINIMAL.to_owned();
    both.push_str("\n[robot.extra]\n");
    assert!(parse_config(&both, "bad-table").is_err());
}

#[test]
fn parse_errors_carry_position_information() {
    let text = "[robot]\nl23 = \"455\"\n";
    match parse_config(text, "pos") {
        Err(ConfigError::Parse { message, path }) => {
            assert_eq!(path, "pos");
            assert!(message.contains("line 2"), "message: {message}");
        }
        other => panic!("expected parse error, got {other:?}"),
    }
}

#[test]
fn bad_mode_string_is_rejected() {
    let text = format!("{MINIMAL}\n[output]\nmode = \"sideways\"\n");
    match parse_config(&text, "mode") {
        Err(ConfigError::Validation(issues)) => {
            assert!(issues.iter().any(|m| m.contains("output.mode")), "{issues:?}");
        }
        other => panic!("expected validation error, got {other:?}"),
    }
    let ok = format!("{MINIMAL}\n[output]\nmode = \"start-frame\"\n");
    let cfg = parse_config(&ok, "mode-ok").unwrap();
    assert_eq!(cfg.sweep.mode, ClassifyMode::StartFrame);
}

#[test]
fn missing_file_reports_io_error_with_path() {
    match load_config(std::path::Path::new("/nonexistent/scenario.toml")) {
        Err(ConfigError::Io { path, .. }) => assert!(path.contains("nonexistent")),
        other => panic!("expected io error, got {other:?}"),
    }
}
