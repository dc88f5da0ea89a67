//! Parallel evaluation of a full grid.
//!
//! Each cell is one independent [`run_point`] on a fresh model instance.
//! Results land in a dense vector indexed by the flat grid index, so the
//! assembled diagram does not depend on scheduling.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::maneuver::{run_point_detailed, HarnessConfig, RampTrace};
use crate::model::VehicleModel;
use crate::types::{DiagramMetadata, GggvDiagram, GggvPoint, GridError, LimitStatus, SweepGrid};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    /// Worker threads, at least 1.
    pub workers: usize,
    /// Keep the ramp trace of every cell.
    pub keep_traces: bool,
    /// Hash stored in the diagram metadata; derived from the model
    /// descriptor, grid and harness when absent.
    pub config_hash: Option<String>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            workers: 1,
            keep_traces: false,
            config_hash: None,
        }
    }
}

impl SweepOptions {
    pub fn with_workers(workers: usize) -> Self {
        SweepOptions {
            workers,
            ..SweepOptions::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub diagram: GggvDiagram,
    /// Wall time per cell, in grid-index order.
    pub point_wall_times: Vec<Duration>,
    pub status_counts: BTreeMap<LimitStatus, usize>,
    /// Flat indices of cells that ended in a numerical fault.
    pub faulted: Vec<usize>,
    pub total_runtime: Duration,
    pub workers: usize,
    /// Per-cell traces when requested.
    pub traces: Option<Vec<Option<RampTrace>>>,
}

impl SweepReport {
    pub fn count(&self, status: LimitStatus) -> usize {
        self.status_counts.get(&status).copied().unwrap_or(0)
    }

    pub fn has_faults(&self) -> bool {
        !self.faulted.is_empty()
    }
}

/// Stable hex digest of anything serializable.
pub fn digest_json<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("serializable value");
    hex::encode(Sha256::digest(bytes))
}

/// Runs every grid cell on `workers` threads.
///
/// Per-cell failures become `Unfeasible` cells; the sweep itself never aborts.
pub fn run_sweep<M, F>(factory: F, grid: &SweepGrid, cfg: &HarnessConfig, options: &SweepOptions) -> SweepReport
where
    M: VehicleModel,
    F: Fn() -> M + Sync,
{
    let started = Instant::now();
    let workers = options.workers.max(1);
    let probe = factory();
    let descriptor = probe.descriptor().clone();
    drop(probe);

    let cell = |flat: usize| {
        let t = Instant::now();
        let (v, a_z, a_x) = grid.node(flat);
        let model = factory();
        let run = run_point_detailed(&model, v, a_z, a_x, cfg);
        let trace = if options.keep_traces { run.trace } else { None };
        (run.point, t.elapsed(), trace)
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    let results: Vec<(GggvPoint, Duration, Option<RampTrace>)> =
        pool.install(|| (0..grid.len()).into_par_iter().map(cell).collect());

    let mut points = Vec::with_capacity(results.len());
    let mut times = Vec::with_capacity(results.len());
    let mut traces = Vec::with_capacity(results.len());
    let mut status_counts = BTreeMap::new();
    let mut faulted = Vec::new();
    for (flat, (point, time, trace)) in results.into_iter().enumerate() {
        *status_counts.entry(point.status).or_insert(0) += 1;
        if point.is_fault() {
            faulted.push(flat);
        }
        points.push(point);
        times.push(time);
        traces.push(trace);
    }

    let hash = options
        .config_hash
        .clone()
        .unwrap_or_else(|| digest_json(&(&descriptor, grid, cfg)));
    let metadata = DiagramMetadata::new(descriptor.name.clone(), hash, cfg.clone());
    let diagram = GggvDiagram::new(grid.clone(), points, metadata).expect("one point per cell in grid order");

    SweepReport {
        diagram,
        point_wall_times: times,
        status_counts,
        faulted,
        total_runtime: started.elapsed(),
        workers,
        traces: options.keep_traces.then_some(traces),
    }
}

/// One boundary point of a g-g cross-section, m/s².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GgPoint {
    pub a_x: f64,
    pub a_y: f64,
}

/// Boundary of the g-g cross-section at `(v, a_z)`.
///
/// The polyline runs down the positive-`a_y` side in decreasing `a_x` and back
/// up the mirrored side, skipping unfeasible cells.
pub fn slice_gg(diagram: &GggvDiagram, v: f64, a_z: f64) -> Result<Vec<GgPoint>, GridError> {
    let grid = diagram.grid();
    let a_x0 = grid.longitudinal_accels()[0];
    let (i, j, _) = grid.grid_index(v, a_z, a_x0)?;
    let right: Vec<GgPoint> = (0..grid.shape().2)
        .rev()
        .filter_map(|k| {
            let p = diagram.get(i, j, k);
            p.a_y_corr.map(|a_y| GgPoint { a_x: p.a_x, a_y })
        })
        .collect();
    let left = right.iter().rev().map(|p| GgPoint { a_x: p.a_x, a_y: -p.a_y });
    Ok(right.iter().copied().chain(left).collect())
}
