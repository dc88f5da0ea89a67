//! Shared domain types: observables, control inputs, the sweep grid and the
//! dense g-g-g-v diagram container.
//!
//! Units are SI throughout. Wheel arrays are always ordered FL, FR, RL, RR.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::maneuver::HarnessConfig;

/// Wheel index order used by every per-wheel array.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wheel {
    FrontLeft = 0,
    FrontRight = 1,
    RearLeft = 2,
    RearRight = 3,
}

impl Wheel {
    pub const ALL: [Wheel; 4] = [
        Wheel::FrontLeft,
        Wheel::FrontRight,
        Wheel::RearLeft,
        Wheel::RearRight,
    ];

    pub fn is_front(self) -> bool {
        matches!(self, Wheel::FrontLeft | Wheel::FrontRight)
    }

    pub fn is_left(self) -> bool {
        matches!(self, Wheel::FrontLeft | Wheel::RearLeft)
    }
}

/// Quantities a model must expose after every step.
///
/// Accelerations are expressed in the vehicle frame. The sideslip angle is
/// `atan2(v_y, v_x)` and the pitch angle is positive nose-down.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Observables {
    pub speed: f64,
    pub longitudinal_accel: f64,
    pub lateral_accel: f64,
    pub yaw_rate: f64,
    pub sideslip: f64,
    pub pitch: f64,
    pub wheel_loads: [f64; 4],
}

impl Observables {
    /// True when any wheel carries a negative vertical load.
    pub fn wheel_lift(&self) -> bool {
        self.wheel_loads.iter().any(|&f| f < 0.0)
    }

    /// Steady-state yaw mismatch `a_y - v * yaw_rate`.
    pub fn yaw_mismatch(&self) -> f64 {
        self.lateral_accel - self.speed * self.yaw_rate
    }

    pub fn is_finite(&self) -> bool {
        [
            self.speed,
            self.longitudinal_accel,
            self.lateral_accel,
            self.yaw_rate,
            self.sideslip,
            self.pitch,
        ]
        .iter()
        .chain(self.wheel_loads.iter())
        .all(|x| x.is_finite())
    }
}

/// Per-step model input.
///
/// The external forces act at the center of gravity and are fixed to the
/// vehicle's longitudinal and vertical axes.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ControlInput {
    /// Road-wheel steering angle in rad.
    pub steering: f64,
    /// Wheel torques in N·m, FL/FR/RL/RR.
    pub wheel_torques: [f64; 4],
    pub external_force_x: f64,
    pub external_force_z: f64,
}

impl ControlInput {
    pub fn is_finite(&self) -> bool {
        self.steering.is_finite()
            && self.external_force_x.is_finite()
            && self.external_force_z.is_finite()
            && self.wheel_torques.iter().all(|t| t.is_finite())
    }

    pub fn total_torque(&self) -> f64 {
        self.wheel_torques.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("grid axis `{axis}` is empty")]
    EmptyAxis { axis: &'static str },
    #[error("grid axis `{axis}` contains a non-finite value")]
    NonFinite { axis: &'static str },
    #[error("grid axis `{axis}` is not strictly increasing")]
    NotIncreasing { axis: &'static str },
    #[error("grid axis `speeds` must be strictly positive")]
    NonPositiveSpeed,
    #[error("({v}, {a_z}, {a_x}) is not a grid node")]
    NotOnGrid { v: f64, a_z: f64, a_x: f64 },
}

/// The `(v, a_z, a_x)` sampling grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid", into = "RawGrid")]
pub struct SweepGrid {
    speeds: Vec<f64>,
    vertical_accels: Vec<f64>,
    longitudinal_accels: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    speeds: Vec<f64>,
    vertical_accels: Vec<f64>,
    longitudinal_accels: Vec<f64>,
}

impl TryFrom<RawGrid> for SweepGrid {
    type Error = GridError;

    fn try_from(raw: RawGrid) -> Result<Self, Self::Error> {
        SweepGrid::new(raw.speeds, raw.vertical_accels, raw.longitudinal_accels)
    }
}

impl From<SweepGrid> for RawGrid {
    fn from(grid: SweepGrid) -> Self {
        RawGrid {
            speeds: grid.speeds,
            vertical_accels: grid.vertical_accels,
            longitudinal_accels: grid.longitudinal_accels,
        }
    }
}

fn check_axis(axis: &'static str, values: &[f64]) -> Result<(), GridError> {
    if values.is_empty() {
        return Err(GridError::EmptyAxis { axis });
    }
    if values.iter().any(|x| !x.is_finite()) {
        return Err(GridError::NonFinite { axis });
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(GridError::NotIncreasing { axis });
    }
    Ok(())
}

/// Index of `x` in `axis`, matching within 1e-12 relative (absolute below 1).
fn axis_index(axis: &[f64], x: f64) -> Option<usize> {
    axis.iter()
        .position(|&g| (x - g).abs() <= 1e-12 * g.abs().max(1.0))
}

impl SweepGrid {
    pub fn new(
        speeds: Vec<f64>,
        vertical_accels: Vec<f64>,
        longitudinal_accels: Vec<f64>,
    ) -> Result<Self, GridError> {
        check_axis("speeds", &speeds)?;
        check_axis("vertical_accels", &vertical_accels)?;
        check_axis("longitudinal_accels", &longitudinal_accels)?;
        if speeds[0] <= 0.0 {
            return Err(GridError::NonPositiveSpeed);
        }
        Ok(SweepGrid {
            speeds,
            vertical_accels,
            longitudinal_accels,
        })
    }

    pub fn speeds(&self) -> &[f64] {
        &self.speeds
    }

    pub fn vertical_accels(&self) -> &[f64] {
        &self.vertical_accels
    }

    pub fn longitudinal_accels(&self) -> &[f64] {
        &self.longitudinal_accels
    }

    /// `(n_v, n_az, n_ax)`.
    pub fn shape(&self) -> (usize, usize, usize) {
        (
            self.speeds.len(),
            self.vertical_accels.len(),
            self.longitudinal_accels.len(),
        )
    }

    pub fn len(&self) -> usize {
        let (a, b, c) = self.shape();
        a * b * c
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Flat index of `(i_v, i_az, i_ax)` in row-major order.
    pub fn flat_index(&self, i: usize, j: usize, k: usize) -> usize {
        let (_, naz, nax) = self.shape();
        (i * naz + j) * nax + k
    }

    pub fn unflatten(&self, flat: usize) -> (usize, usize, usize) {
        let (_, naz, nax) = self.shape();
        (flat / (naz * nax), (flat / nax) % naz, flat % nax)
    }

    /// Grid values `(v, a_z, a_x)` at a flat index.
    pub fn node(&self, flat: usize) -> (f64, f64, f64) {
        let (i, j, k) = self.unflatten(flat);
        (
            self.speeds[i],
            self.vertical_accels[j],
            self.longitudinal_accels[k],
        )
    }

    /// Looks up the indices of a grid node.
    pub fn grid_index(&self, v: f64, a_z: f64, a_x: f64) -> Result<(usize, usize, usize), GridError> {
        let not_on_grid = || GridError::NotOnGrid { v, a_z, a_x };
        let i = axis_index(&self.speeds, v).ok_or_else(not_on_grid)?;
        let j = axis_index(&self.vertical_accels, a_z).ok_or_else(not_on_grid)?;
        let k = axis_index(&self.longitudinal_accels, a_x).ok_or_else(not_on_grid)?;
        Ok((i, j, k))
    }
}

/// Uniformly spaced values including both end points.
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        n => (0..n)
            .map(|i| start + (stop - start) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// How a ramp-steer run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitStatus {
    /// Front-axle saturation: a confirmed peak in lateral acceleration.
    UndersteerLimit,
    /// Rear-axle saturation: the last sample before open-loop instability.
    OversteerLimit,
    Unfeasible,
}

impl LimitStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            LimitStatus::UndersteerLimit => "understeer_limit",
            LimitStatus::OversteerLimit => "oversteer_limit",
            LimitStatus::Unfeasible => "unfeasible",
        }
    }
}

/// Why a cell is unfeasible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Diagnostic {
    /// Speed could not be held at the requested emulated acceleration.
    NotSettled,
    InvalidSpeed,
    NonPositiveGain,
    /// The ramp ended without a confirmed peak or instability onset.
    NoLimitFound,
    /// The model produced non-finite states; recorded as a fault.
    NumericalDivergence,
}

impl Diagnostic {
    pub fn is_fault(self) -> bool {
        matches!(self, Diagnostic::NumericalDivergence)
    }
}

/// Result for one grid node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GggvPoint {
    pub v: f64,
    pub a_z: f64,
    pub a_x: f64,
    pub a_y_corr: Option<f64>,
    pub status: LimitStatus,
    pub kappa: Option<f64>,
    pub beta_at_limit: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<Diagnostic>,
}

impl GggvPoint {
    pub fn unfeasible(v: f64, a_z: f64, a_x: f64, diagnostic: Diagnostic, kappa: Option<f64>) -> Self {
        GggvPoint {
            v,
            a_z,
            a_x,
            a_y_corr: None,
            status: LimitStatus::Unfeasible,
            kappa,
            beta_at_limit: None,
            diagnostic: Some(diagnostic),
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.status != LimitStatus::Unfeasible
    }

    pub fn is_fault(&self) -> bool {
        self.diagnostic.is_some_and(Diagnostic::is_fault)
    }
}

/// Provenance stored alongside a diagram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramMetadata {
    pub model_name: String,
    pub config_hash: String,
    pub harness: HarnessConfig,
    pub tool_version: String,
}

impl DiagramMetadata {
    pub fn new(model_name: impl Into<String>, config_hash: impl Into<String>, harness: HarnessConfig) -> Self {
        DiagramMetadata {
            model_name: model_name.into(),
            config_hash: config_hash.into(),
            harness,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QueryError {
    #[error("query point ({v}, {a_z}, {a_x}) lies outside the grid")]
    OutOfBounds { v: f64, a_z: f64, a_x: f64 },
    #[error("query point ({v}, {a_z}, {a_x}) touches an unfeasible cell")]
    UnfeasibleNeighborhood { v: f64, a_z: f64, a_x: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagramError {
    #[error("diagram holds {got} points but the grid has {expected} cells")]
    WrongSize { expected: usize, got: usize },
    #[error("point {index} does not sit on its grid node")]
    Misplaced { index: usize },
}

/// Dense `[i_v][i_az][i_ax]` array of results over a [`SweepGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GggvDiagram {
    grid: SweepGrid,
    points: Vec<GggvPoint>,
    metadata: DiagramMetadata,
}

impl GggvDiagram {
    /// Points must be in flat grid order and carry their node's coordinates.
    pub fn new(grid: SweepGrid, points: Vec<GggvPoint>, metadata: DiagramMetadata) -> Result<Self, DiagramError> {
        if points.len() != grid.len() {
            return Err(DiagramError::WrongSize {
                expected: grid.len(),
                got: points.len(),
            });
        }
        for (index, p) in points.iter().enumerate() {
            if grid.node(index) != (p.v, p.a_z, p.a_x) {
                return Err(DiagramError::Misplaced { index });
            }
        }
        Ok(GggvDiagram {
            grid,
            points,
            metadata,
        })
    }

    pub fn grid(&self) -> &SweepGrid {
        &self.grid
    }

    pub fn points(&self) -> &[GggvPoint] {
        &self.points
    }

    pub fn metadata(&self) -> &DiagramMetadata {
        &self.metadata
    }

    pub fn metadata_mut(&mut self) -> &mut DiagramMetadata {
        &mut self.metadata
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &GggvPoint {
        &self.points[self.grid.flat_index(i, j, k)]
    }

    pub fn point_at(&self, v: f64, a_z: f64, a_x: f64) -> Result<&GggvPoint, GridError> {
        let (i, j, k) = self.grid.grid_index(v, a_z, a_x)?;
        Ok(self.get(i, j, k))
    }

    /// Trilinear interpolation of `a_y_corr`.
    ///
    /// Axes where the query coincides with a node (or that have a single
    /// node) collapse onto that node, so exact node queries only require the
    /// node itself to be feasible.
    pub fn query(&self, v: f64, a_z: f64, a_x: f64) -> Result<f64, QueryError> {
        let oob = QueryError::OutOfBounds { v, a_z, a_x };
        let sv = bracket(self.grid.speeds(), v).ok_or(oob.clone())?;
        let sz = bracket(self.grid.vertical_accels(), a_z).ok_or(oob.clone())?;
        let sx = bracket(self.grid.longitudinal_accels(), a_x).ok_or(oob)?;

        let mut acc = 0.0;
        for &(i, wi) in sv.corners() {
            for &(j, wj) in sz.corners() {
                for &(k, wk) in sx.corners() {
                    let value = self.get(i, j, k).a_y_corr.ok_or(
                        QueryError::UnfeasibleNeighborhood { v, a_z, a_x },
                    )?;
                    acc += wi * wj * wk * value;
                }
            }
        }
        Ok(acc)
    }
}

/// Interpolation stencil along one axis.
#[derive(Debug, Clone, Copy)]
enum Bracket {
    Node([(usize, f64); 1]),
    Segment([(usize, f64); 2]),
}

impl Bracket {
    fn corners(&self) -> &[(usize, f64)] {
        match self {
            Bracket::Node(c) => c,
            Bracket::Segment(c) => c,
        }
    }
}

fn bracket(axis: &[f64], x: f64) -> Option<Bracket> {
    if !x.is_finite() {
        return None;
    }
    if let Some(i) = axis_index(axis, x) {
        return Some(Bracket::Node([(i, 1.0)]));
    }
    let first = *axis.first()?;
    let last = *axis.last()?;
    if x < first || x > last {
        return None;
    }
    let hi = axis.iter().position(|&g| g > x)?;
    let lo = hi - 1;
    let t = (x - axis[lo]) / (axis[hi] - axis[lo]);
    Some(Bracket::Segment([(lo, 1.0 - t), (hi, t)]))
}
