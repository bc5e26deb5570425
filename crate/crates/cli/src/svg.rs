//! SVG rendering of sweep results: a class map (one colored cell per grid
//! point) and a direction field (one arrow per grid point at its optimized
//! first rotation angle).
//!
//! Output is fully deterministic: fixed attribute order, fixed float
//! precision, no timestamps.

use std::fmt::Write as _;
use std::path::Path;

use gridpick_core::{ClassCounts, GridReport, GridSpec, PoseClass};

use crate::report::ReportError;

pub const COLOR_RED: &str = "#d32f2f";
pub const COLOR_BLUE: &str = "#1976d2";
pub const COLOR_BLACK: &str = "#000000";

/// Cell edge length in pixels.
pub const CELL_PX: f64 = 20.0;
const MARGIN: f64 = 10.0;
const LEGEND_H: f64 = 40.0;

fn class_color(class: PoseClass) -> &'static str {
    match class {
        PoseClass::Red => COLOR_RED,
        PoseClass::Blue => COLOR_BLUE,
        PoseClass::Black => COLOR_BLACK,
    }
}

/// Top-left corner of cell (k, l); l grows upward, SVG y grows downward.
fn cell_origin(grid: &GridSpec, k: usize, l: usize) -> (f64, f64) {
    let x = MARGIN + (k - 1) as f64 * CELL_PX;
    let y = MARGIN + (grid.by - l) as f64 * CELL_PX;
    (x, y)
}

fn svg_open(out: &mut String, grid: &GridSpec) {
    let width = 2.0 * MARGIN + grid.bx as f64 * CELL_PX;
    let height = 2.0 * MARGIN + grid.by as f64 * CELL_PX + LEGEND_H;
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#,
    );
}

fn legend(out: &mut String, grid: &GridSpec, before: &ClassCounts, after: &ClassCounts) {
    let y = 2.0 * MARGIN + grid.by as f64 * CELL_PX;
    let entries = [
        (COLOR_RED, "red", after.red, before.red),
        (COLOR_BLUE, "blue", after.blue, before.blue),
        (COLOR_BLACK, "black", after.black, before.black),
    ];
    for (i, (color, name, now, was)) in entries.iter().enumerate() {
        let x = MARGIN + i as f64 * 110.0;
        let _ = writeln!(
            out,
            r#"<rect class="legend" x="{x:.2}" y="{y:.2}" width="12" height="12" fill="{color}"/>"#,
        );
        let _ = writeln!(
            out,
            r#"<text x="{tx:.2}" y="{ty:.2}" font-family="sans-serif" font-size="11">{name}: {now} (was {was})</text>"#,
            tx = x + 16.0,
            ty = y + 10.0,
        );
    }
}

/// Class map: each grid cell filled with its post-optimization class color.
/// The legend reports both the optimized and the fixed-orientation tallies.
pub fn render_map_svg(report: &GridReport, grid: &GridSpec) -> String {
    let mut out = String::new();
    svg_open(&mut out, grid);
    for p in &report.points {
        let (x, y) = cell_origin(grid, p.k, p.l);
        let _ = writeln!(
            out,
            r##"<rect class="cell" x="{x:.2}" y="{y:.2}" width="{CELL_PX:.0}" height="{CELL_PX:.0}" fill="{}" stroke="#ffffff" stroke-width="0.5"/>"##,
            class_color(p.class_after),
        );
    }
    legend(&mut out, grid, &report.before, &report.after);
    out.push_str("</svg>\n");
    out
}

/// Direction field: colored cells overlaid with a white arrow per cell
/// pointing at the optimized first rotation angle (angle 0 points along +x,
/// positive angles turn counter-clockwise in box coordinates).
pub fn render_field_svg(report: &GridReport, grid: &GridSpec) -> String {
    let mut out = String::new();
    svg_open(&mut out, grid);
    for p in &report.points {
        let (x, y) = cell_origin(grid, p.k, p.l);
        let _ = writeln!(
            out,
            r##"<rect class="cell" x="{x:.2}" y="{y:.2}" width="{CELL_PX:.0}" height="{CELL_PX:.0}" fill="{}" stroke="#ffffff" stroke-width="0.5"/>"##,
            class_color(p.class_after),
        );
        let (cx, cy) = (x + 0.5 * CELL_PX, y + 0.5 * CELL_PX);
        let angle = p.alpha.a0();
        let (dx, dy) = (angle.cos(), -angle.sin());
        let len = 0.38 * CELL_PX;
        let (tip_x, tip_y) = (cx + len * dx, cy + len * dy);
        let (tail_x, tail_y) = (cx - len * dx, cy - len * dy);
        let _ = writeln!(
            out,
            r##"<line class="arrow" x1="{tail_x:.2}" y1="{tail_y:.2}" x2="{tip_x:.2}" y2="{tip_y:.2}" stroke="#ffffff" stroke-width="1.2"/>"##,
        );
        // Two short barbs: the reversed direction rotated by ±30°.
        let head = 0.18 * CELL_PX;
        for side in [1.0_f64, -1.0] {
            let (c30, s30) = (0.866_025_403_784_438_6_f64, 0.5 * side);
            let rx = -dx * c30 + dy * s30;
            let ry = -dx * s30 - dy * c30;
            let _ = writeln!(
                out,
                r##"<line class="head" x1="{tip_x:.2}" y1="{tip_y:.2}" x2="{hx:.2}" y2="{hy:.2}" stroke="#ffffff" stroke-width="1.2"/>"##,
                hx = tip_x + head * rx,
                hy = tip_y + head * ry,
            );
        }
    }
    legend(&mut out, grid, &report.before, &report.after);
    out.push_str("</svg>\n");
    out
}

/// Writes the class map and direction field next to each other.
pub fn write_maps_svg(
    report: &GridReport,
    grid: &GridSpec,
    path_map: &Path,
    path_field: &Path,
) -> Result<(), ReportError> {
    for (path, text) in [
        (path_map, render_map_svg(report, grid)),
        (path_field, render_field_svg(report, grid)),
    ] {
        std::fs::write(path, text).map_err(|source| ReportError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(())
}
