use crate::model::{route_torque, ModelError, VehicleModel};
use crate::types::{ControlInput, Observables};

use super::detect::{DetectorError, Limit, LimitDetector};
use super::pid::{PidGains, SpeedController};
use super::{ExternalForces, HarnessConfig, ManeuverError};

/// Speed deviation, relative to the target, at which a hold is abandoned.
const DIVERGENCE_FRACTION: f64 = 0.2;

/// One recorded ramp sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample {
    /// s, since the start of the maneuver
    pub time: f64,
    /// Commanded steering, rad.
    pub steering: f64,
    pub observables: Observables,
    /// Applied wheel torques FL/FR/RL/RR, N·m.
    pub wheel_torques: [f64; 4],
}

impl TraceSample {
    pub fn total_torque(&self) -> f64 {
        self.wheel_torques.iter().sum()
    }
}

/// Ramp-steer time series at a constant sample spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct RampTrace {
    spacing: f64,
    samples: Vec<TraceSample>,
}

impl RampTrace {
    pub fn new(spacing: f64) -> Self {
        RampTrace {
            spacing,
            samples: Vec::new(),
        }
    }

    pub fn from_samples(spacing: f64, samples: Vec<TraceSample>) -> Self {
        RampTrace { spacing, samples }
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn samples(&self) -> &[TraceSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    fn push(&mut self, sample: TraceSample) {
        self.samples.push(sample);
    }
}

/// Result of a settled speed hold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoldOutcome {
    /// Total wheel torque holding the speed, N·m.
    pub holding_torque: f64,
    /// Time spent until the settle window completed, s.
    pub elapsed: f64,
}

/// How a ramp ended.
#[derive(Debug, Clone, PartialEq)]
pub struct RampOutcome {
    pub trace: RampTrace,
    pub limit: Result<Limit, DetectorError>,
    /// Largest speed deviation seen up to the reported sample, m/s.
    pub max_speed_error: f64,
}

#[derive(Debug, Clone, Copy)]
struct Anchor {
    time: f64,
    torque: f64,
    lateral_accel: f64,
}

/// A single QSS experiment on one model instance.
///
/// The speed controller stays active throughout, so its integrator carries
/// over from the hold into the gain test and the ramp.
pub struct Maneuver<'a, M: VehicleModel> {
    model: &'a M,
    cfg: &'a HarnessConfig,
    forces: ExternalForces,
    target_speed: f64,
    dt: f64,
    state: M::State,
    observables: Observables,
    controller: SpeedController,
    steering: f64,
    wheel_torques: [f64; 4],
    time: f64,
}

impl<'a, M: VehicleModel> Maneuver<'a, M> {
    /// Initializes the model at `speed` and prepares to hold it.
    pub fn start(model: &'a M, cfg: &'a HarnessConfig, speed: f64, forces: ExternalForces) -> Result<Self, ManeuverError> {
        let state = model.initialize(speed)?;
        Ok(Self::from_state(model, cfg, state, speed, forces))
    }

    pub fn from_state(model: &'a M, cfg: &'a HarnessConfig, state: M::State, target_speed: f64, forces: ExternalForces) -> Self {
        let descriptor = model.descriptor();
        let gains = cfg
            .pid_gains
            .unwrap_or_else(|| PidGains::for_descriptor(descriptor));
        let observables = model.observe(&state);
        Maneuver {
            model,
            cfg,
            forces,
            target_speed,
            dt: model.max_time_step(),
            state,
            observables,
            controller: SpeedController::new(gains, target_speed, descriptor.torque_limit),
            steering: 0.0,
            wheel_torques: [0.0; 4],
            time: 0.0,
        }
    }

    pub fn state(&self) -> &M::State {
        &self.state
    }

    pub fn observables(&self) -> &Observables {
        &self.observables
    }

    pub fn steering(&self) -> f64 {
        self.steering
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn total_torque(&self) -> f64 {
        self.wheel_torques.iter().sum()
    }

    fn speed_error(&self) -> f64 {
        (self.observables.speed - self.target_speed).abs()
    }

    fn diverged(&self) -> bool {
        self.speed_error() > DIVERGENCE_FRACTION * self.target_speed
    }

    fn advance(&mut self) -> Result<(), ModelError> {
        let torque = self.controller.update(self.observables.speed, self.dt);
        self.wheel_torques = route_torque(torque, self.model.descriptor());
        let input = ControlInput {
            steering: self.steering,
            wheel_torques: self.wheel_torques,
            external_force_x: self.forces.x,
            external_force_z: self.forces.z,
        };
        self.state = self.model.step(&self.state, &input, self.dt)?;
        self.observables = self.model.observe(&self.state);
        self.time += self.dt;
        Ok(())
    }

    /// Steps until speed, wheel torque and lateral acceleration have stayed
    /// quiet for one settle window.
    fn settle(&mut self) -> Result<f64, ManeuverError> {
        let cfg = self.cfg;
        let start = self.time;
        let torque_band = cfg.torque_rate_tolerance * cfg.settle_window;
        let saturation = 0.999 * self.controller.limit();
        let mut anchor: Option<Anchor> = None;
        loop {
            let elapsed = self.time - start;
            if elapsed > cfg.settle_timeout {
                return Err(ManeuverError::NotSettled { elapsed });
            }
            self.advance()?;
            if self.diverged() {
                return Err(ManeuverError::NotSettled {
                    elapsed: self.time - start,
                });
            }
            let torque = self.total_torque();
            let a_y = self.observables.lateral_accel;
            let quiet = self.speed_error() < cfg.speed_tolerance && torque.abs() < saturation;
            if !quiet {
                anchor = None;
                continue;
            }
            match anchor {
                Some(a) if (torque - a.torque).abs() <= torque_band
                    && (a_y - a.lateral_accel).abs() <= cfg.accel_tolerance =>
                {
                    if self.time - a.time >= cfg.settle_window - 0.5 * self.dt {
                        return Ok(self.time - start);
                    }
                }
                _ => {
                    anchor = Some(Anchor {
                        time: self.time,
                        torque,
                        lateral_accel: a_y,
                    })
                }
            }
        }
    }

    /// Holds the target speed under the external forces until settled.
    pub fn hold_speed(&mut self) -> Result<HoldOutcome, ManeuverError> {
        let elapsed = self.settle()?;
        Ok(HoldOutcome {
            holding_torque: self.total_torque(),
            elapsed,
        })
    }

    /// Applies the gain-test steering step and returns `Δa_y / Δδ` after the
    /// response has settled. The ramp continues from the stepped state.
    pub fn gain_test(&mut self) -> Result<f64, ManeuverError> {
        let before = self.observables.lateral_accel;
        self.steering += self.cfg.gain_test_step;
        self.settle()?;
        let delta = self.observables.lateral_accel - before;
        if delta > 0.0 {
            Ok(delta / self.cfg.gain_test_step)
        } else {
            Err(ManeuverError::NonPositiveGain { delta_ay: delta })
        }
    }

    /// Ramps the steering at `steer_rate` until a limit is confirmed, the
    /// steering reaches its maximum, speed is lost or the ramp times out.
    pub fn run_ramp(&mut self, steer_rate: f64) -> Result<RampOutcome, ManeuverError> {
        let cfg = self.cfg;
        let decimation = cfg.trace_decimation.max(1);
        let max_steering = self.model.descriptor().max_steering;
        let mut trace = RampTrace::new(decimation as f64 * self.dt);
        let mut detector = LimitDetector::new(cfg);
        let mut max_speed_error = self.speed_error();
        let start = self.time;

        let record = |m: &Self, trace: &mut RampTrace| {
            trace.push(TraceSample {
                time: m.time,
                steering: m.steering,
                observables: m.observables,
                wheel_torques: m.wheel_torques,
            })
        };
        record(self, &mut trace);
        if let Some(limit) = detector.push(self.time, self.steering, &self.observables) {
            return Ok(RampOutcome {
                trace,
                limit,
                max_speed_error,
            });
        }

        let mut steps = 0usize;
        let limit = loop {
            self.steering = (self.steering + steer_rate * self.dt).min(max_steering);
            self.advance()?;
            steps += 1;
            if steps % decimation == 0 {
                record(self, &mut trace);
            }
            if let Some(limit) = detector.push(self.time, self.steering, &self.observables) {
                break limit;
            }
            max_speed_error = max_speed_error.max(self.speed_error());
            if self.steering >= max_steering || self.time - start >= cfg.ramp_timeout || self.diverged() {
                break Err(DetectorError::NoLimitFound);
            }
        };
        Ok(RampOutcome {
            trace,
            limit,
            max_speed_error,
        })
    }
}
