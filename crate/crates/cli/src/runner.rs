//! Parallel sweep orchestration: fans the grid points out over a rayon pool,
//! reassembles them in deterministic k-major order, and stamps wall time.

use std::time::Instant;

use gridpick_core::{sweep_point, GridReport, GridSpec, PointOutcome, RobotModel, SweepOptions};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Grid(#[from] gridpick_core::GridSpecError),
    #[error("cannot build thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

/// Runs the whole sweep.  `threads = None` uses rayon's default pool size;
/// any positive count builds a dedicated pool.  Results are identical for
/// every thread count because each grid point is solved independently and
/// reassembled in index order.
pub fn run_sweep(
    model: &RobotModel,
    grid: &GridSpec,
    opts: &SweepOptions,
    threads: Option<usize>,
) -> Result<GridReport, RunError> {
    grid.validate()?;
    let start = Instant::now();
    let coords: Vec<(usize, usize)> = (1..=grid.bx)
        .flat_map(|k| (1..=grid.by).map(move |l| (k, l)))
        .collect();
    let solve = |&(k, l): &(usize, usize)| -> PointOutcome { sweep_point(model, grid, opts, k, l) };
    let points: Vec<PointOutcome> = match threads {
        None => coords.par_iter().map(solve).collect(),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
            pool.install(|| coords.par_iter().map(solve).collect())
        }
    };
    let mut report = GridReport::from_points(points);
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}
