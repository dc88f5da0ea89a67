//! The quasi-steady-state ramp-steer experiment.
//!
//! For one `(v, a_z, a_x)` point: emulate the accelerations with external
//! forces at the CoG, hold `v` with the wheel-torque controller, measure the
//! lateral acceleration gain with a small steering step, ramp the steering at
//! `target_jerk / κ`, detect the open-loop-stable maximum and rotate it into
//! the velocity frame.
//!
//! This module only talks to models through [`VehicleModel`].

mod detect;
mod pid;
mod run;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ModelError, VehicleModel};
use crate::types::{Diagnostic, GggvPoint, LimitStatus};
use crate::GRAVITY;

pub use detect::{detect_limit, DetectorError, Limit, LimitDetector, LimitKind};
pub use pid::{PidGains, SpeedController};
pub use run::{HoldOutcome, Maneuver, RampOutcome, RampTrace, TraceSample};

/// Tunables of the QSS harness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HarnessConfig {
    /// Target lateral acceleration ramp rate, m/s³.
    pub target_jerk: f64,
    /// Gain-test steering step, rad.
    pub gain_test_step: f64,
    /// Yaw mismatch `|a_y - v ψ̇|` that flags open-loop instability, m/s².
    pub oversteer_threshold: f64,
    /// m/s
    pub speed_tolerance: f64,
    /// Allowed lateral acceleration drift within a settle window, m/s².
    pub accel_tolerance: f64,
    /// Allowed wheel torque drift rate within a settle window, N·m/s.
    pub torque_rate_tolerance: f64,
    /// s
    pub settle_window: f64,
    /// s
    pub settle_timeout: f64,
    /// s
    pub ramp_timeout: f64,
    /// `[min, max]` steering rate, rad/s.
    pub steer_rate_bounds: [f64; 2],
    /// Speed controller gains; derived from mass and wheel radius when absent.
    pub pid_gains: Option<PidGains>,
    /// Relative drop below the running maximum that confirms a peak.
    pub peak_confirm_drop: f64,
    /// Relative steering growth without a rise in `a_y` that confirms a plateau.
    pub plateau_steer_fraction: f64,
    /// Record every n-th ramp step in the trace.
    pub trace_decimation: usize,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            target_jerk: 1.0,
            gain_test_step: 0.005,
            oversteer_threshold: 0.3,
            speed_tolerance: 0.01,
            accel_tolerance: 0.005,
            torque_rate_tolerance: 10.0,
            settle_window: 0.5,
            settle_timeout: 10.0,
            ramp_timeout: 60.0,
            steer_rate_bounds: [1e-4, 0.5],
            pid_gains: None,
            peak_confirm_drop: 0.002,
            plateau_steer_fraction: 0.25,
            trace_decimation: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid harness setting `{field}`: {reason}")]
pub struct HarnessConfigError {
    pub field: &'static str,
    pub reason: &'static str,
}

impl HarnessConfig {
    pub fn validate(&self) -> Result<(), HarnessConfigError> {
        let positive = [
            ("target_jerk", self.target_jerk),
            ("gain_test_step", self.gain_test_step),
            ("oversteer_threshold", self.oversteer_threshold),
            ("speed_tolerance", self.speed_tolerance),
            ("accel_tolerance", self.accel_tolerance),
            ("torque_rate_tolerance", self.torque_rate_tolerance),
            ("settle_window", self.settle_window),
            ("settle_timeout", self.settle_timeout),
            ("ramp_timeout", self.ramp_timeout),
            ("steer_rate_bounds", self.steer_rate_bounds[0]),
            ("peak_confirm_drop", self.peak_confirm_drop),
            ("plateau_steer_fraction", self.plateau_steer_fraction),
        ];
        for (field, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(HarnessConfigError {
                    field,
                    reason: "must be positive and finite",
                });
            }
        }
        if !(self.steer_rate_bounds[1] > self.steer_rate_bounds[0] && self.steer_rate_bounds[1].is_finite()) {
            return Err(HarnessConfigError {
                field: "steer_rate_bounds",
                reason: "min must be below max",
            });
        }
        if self.peak_confirm_drop >= 1.0 {
            return Err(HarnessConfigError {
                field: "peak_confirm_drop",
                reason: "must be below 1",
            });
        }
        if self.settle_window >= self.settle_timeout {
            return Err(HarnessConfigError {
                field: "settle_window",
                reason: "must be shorter than settle_timeout",
            });
        }
        if self.trace_decimation == 0 {
            return Err(HarnessConfigError {
                field: "trace_decimation",
                reason: "must be at least 1",
            });
        }
        if let Some(g) = self.pid_gains {
            if [g.kp, g.ki, g.kd].iter().any(|k| !(*k >= 0.0 && k.is_finite())) {
                return Err(HarnessConfigError {
                    field: "pid_gains",
                    reason: "gains must be non-negative and finite",
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ManeuverError {
    #[error("speed did not settle within {elapsed:.2} s")]
    NotSettled { elapsed: f64 },
    #[error("gain test produced a non-positive lateral response ({delta_ay} m/s²)")]
    NonPositiveGain { delta_ay: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl ManeuverError {
    pub fn diagnostic(&self) -> Diagnostic {
        match self {
            ManeuverError::NotSettled { .. } => Diagnostic::NotSettled,
            ManeuverError::NonPositiveGain { .. } => Diagnostic::NonPositiveGain,
            ManeuverError::Model(ModelError::InvalidSpeed { .. }) => Diagnostic::InvalidSpeed,
            ManeuverError::Model(_) => Diagnostic::NumericalDivergence,
        }
    }
}

/// Virtual forces at the CoG, N.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExternalForces {
    pub x: f64,
    pub z: f64,
}

/// Forces that emulate `a_x` and `a_z` at constant speed:
/// `F_x = -m a_x`, `F_z = m (a_z - g)`.
pub fn external_forces(mass: f64, a_x: f64, a_z: f64) -> ExternalForces {
    ExternalForces {
        x: -mass * a_x,
        z: mass * (a_z - GRAVITY),
    }
}

/// Ramp steering rate `target_jerk / κ`, clamped to the configured bounds.
pub fn steer_rate(kappa: f64, cfg: &HarnessConfig) -> f64 {
    let [lo, hi] = cfg.steer_rate_bounds;
    (cfg.target_jerk / kappa).clamp(lo, hi)
}

/// Component of `(a_x, a_y_max)` orthogonal to the velocity vector at sideslip `beta`.
pub fn sideslip_correct(a_y_max: f64, a_x: f64, beta: f64) -> f64 {
    a_y_max * beta.cos() - a_x * beta.sin()
}

/// Everything a single grid-point run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct PointRun {
    pub point: GggvPoint,
    /// Vehicle-frame maximum before sideslip correction.
    pub a_y_max: Option<f64>,
    pub limit: Option<Limit>,
    pub trace: Option<RampTrace>,
    pub max_speed_error: Option<f64>,
}

/// Runs the full experiment for one grid point on a fresh model instance.
pub fn run_point<M, F>(factory: &F, v: f64, a_z: f64, a_x: f64, cfg: &HarnessConfig) -> GggvPoint
where
    M: VehicleModel,
    F: Fn() -> M,
{
    let model = factory();
    run_point_detailed(&model, v, a_z, a_x, cfg).point
}

/// Like [`run_point`] on an existing model, keeping the trace and the raw limit.
pub fn run_point_detailed<M: VehicleModel>(model: &M, v: f64, a_z: f64, a_x: f64, cfg: &HarnessConfig) -> PointRun {
    let unfeasible = |diagnostic, kappa, trace, max_speed_error| PointRun {
        point: GggvPoint::unfeasible(v, a_z, a_x, diagnostic, kappa),
        a_y_max: None,
        limit: None,
        trace,
        max_speed_error,
    };

    let forces = external_forces(model.descriptor().mass, a_x, a_z);
    let mut maneuver = match Maneuver::start(model, cfg, v, forces) {
        Ok(m) => m,
        Err(e) => return unfeasible(e.diagnostic(), None, None, None),
    };
    if let Err(e) = maneuver.hold_speed() {
        return unfeasible(e.diagnostic(), None, None, None);
    }
    let kappa = match maneuver.gain_test() {
        Ok(k) => k,
        Err(e) => return unfeasible(e.diagnostic(), None, None, None),
    };
    let outcome = match maneuver.run_ramp(steer_rate(kappa, cfg)) {
        Ok(o) => o,
        Err(e) => return unfeasible(e.diagnostic(), Some(kappa), None, None),
    };
    let limit = match outcome.limit {
        Ok(limit) => limit,
        Err(_) => {
            return unfeasible(
                Diagnostic::NoLimitFound,
                Some(kappa),
                Some(outcome.trace),
                Some(outcome.max_speed_error),
            )
        }
    };

    let status = match limit.kind {
        LimitKind::UndersteerPeak => LimitStatus::UndersteerLimit,
        LimitKind::OversteerOnset => LimitStatus::OversteerLimit,
    };
    PointRun {
        point: GggvPoint {
            v,
            a_z,
            a_x,
            a_y_corr: Some(sideslip_correct(limit.lateral_accel, a_x, limit.sideslip)),
            status,
            kappa: Some(kappa),
            beta_at_limit: Some(limit.sideslip),
            diagnostic: None,
        },
        a_y_max: Some(limit.lateral_accel),
        limit: Some(limit),
        trace: Some(outcome.trace),
        max_speed_error: Some(outcome.max_speed_error),
    }
}

#[cfg(test)]
mod tests;
