//! Limit detection on a ramp-steer trace.
//!
//! Two criteria run on every sample:
//!
//! * open-loop instability: `|a_y - v·ψ̇| > ε_th`; the sample before the first
//!   violation is reported;
//! * saturation: the running maximum of `a_y` is confirmed either by a
//!   relative drop of `peak_confirm_drop` below it, or by the steering angle
//!   growing by `plateau_steer_fraction` without `a_y` rising by more than
//!   `peak_confirm_drop`.

use serde::{Deserialize, Serialize};

use super::{HarnessConfig, RampTrace, TraceSample};
use crate::types::Observables;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitKind {
    UndersteerPeak,
    OversteerOnset,
}

/// The detected open-loop-stable maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Limit {
    pub kind: LimitKind,
    /// m/s², vehicle frame
    pub lateral_accel: f64,
    /// rad
    pub sideslip: f64,
    /// Commanded steering at the reported sample, rad.
    pub steering: f64,
    pub time: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectorError {
    /// The trace ended before either criterion fired.
    NoLimitFound,
    /// The very first sample already violates the yaw criterion.
    UnstableAtStart,
}

#[derive(Debug, Clone, Copy)]
struct Reading {
    time: f64,
    steering: f64,
    lateral_accel: f64,
    sideslip: f64,
}

impl Reading {
    fn limit(&self, kind: LimitKind) -> Limit {
        Limit {
            kind,
            lateral_accel: self.lateral_accel,
            sideslip: self.sideslip,
            steering: self.steering,
            time: self.time,
        }
    }
}

/// Incremental detector fed one sample at a time.
#[derive(Debug, Clone)]
pub struct LimitDetector {
    threshold: f64,
    drop: f64,
    plateau: f64,
    previous: Option<Reading>,
    best: Option<Reading>,
    anchor: Option<Reading>,
}

impl LimitDetector {
    pub fn new(cfg: &HarnessConfig) -> Self {
        LimitDetector {
            threshold: cfg.oversteer_threshold,
            drop: cfg.peak_confirm_drop,
            plateau: cfg.plateau_steer_fraction,
            previous: None,
            best: None,
            anchor: None,
        }
    }

    /// Returns `Some` once a limit is confirmed; the detector should not be
    /// fed further after that.
    pub fn push(&mut self, time: f64, steering: f64, obs: &Observables) -> Option<Result<Limit, DetectorError>> {
        let now = Reading {
            time,
            steering,
            lateral_accel: obs.lateral_accel,
            sideslip: obs.sideslip,
        };

        if obs.yaw_mismatch().abs() > self.threshold {
            return Some(match self.previous {
                Some(stable) => Ok(stable.limit(LimitKind::OversteerOnset)),
                None => Err(DetectorError::UnstableAtStart),
            });
        }
        self.previous = Some(now);

        let best = match self.best {
            Some(b) if b.lateral_accel >= now.lateral_accel => b,
            _ => {
                self.best = Some(now);
                now
            }
        };
        let anchor = match self.anchor {
            Some(a) if now.lateral_accel <= a.lateral_accel + self.drop * a.lateral_accel.abs() => a,
            _ => {
                self.anchor = Some(now);
                now
            }
        };

        let dropped = best.lateral_accel > 0.0 && now.lateral_accel <= (1.0 - self.drop) * best.lateral_accel;
        let stalled = anchor.steering > 0.0 && now.steering >= (1.0 + self.plateau) * anchor.steering;
        (dropped || stalled).then(|| Ok(best.limit(LimitKind::UndersteerPeak)))
    }
}

/// Runs the detector over a recorded trace.
pub fn detect_limit(trace: &RampTrace, cfg: &HarnessConfig) -> Result<Limit, DetectorError> {
    let mut detector = LimitDetector::new(cfg);
    for TraceSample {
        time,
        steering,
        observables,
        ..
    } in trace.samples()
    {
        if let Some(result) = detector.push(*time, *steering, observables) {
            return result;
        }
    }
    Err(DetectorError::NoLimitFound)
}
