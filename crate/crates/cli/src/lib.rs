//! Batch front end for the pallet-grid reachability pipeline: scenario files,
//! the parallel sweep driver, CSV/SVG report emission and the `gridpick`
//! command-line interface.
//!
//! The kinematics, the slack-variable objective and the optimizer live in
//! [`gridpick_core`]; this crate only adds IO and orchestration.

#![forbid(unsafe_code)]

pub mod cli;
pub mod config;
pub mod report;
pub mod runner;
pub mod svg;

pub use cli::{run_cli, EXIT_CONFIG, EXIT_RUNTIME, ORACLE_TOL};
pub use config::{load_config, parse_config, save_config, ConfigError, OutputPaths, ScenarioConfig};
pub use report::{
    counts_of, parse_report_csv, render_report_csv, write_report_csv, ReportError, ReportRow,
    CSV_HEADER,
};
pub use runner::{run_sweep, RunError};
pub use svg::{render_field_svg, render_map_svg, write_maps_svg, COLOR_BLACK, COLOR_BLUE, COLOR_RED};
