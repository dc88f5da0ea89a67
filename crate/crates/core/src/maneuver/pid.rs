use serde::{Deserialize, Serialize};

use crate::model::ModelDescriptor;

/// PID gains on speed error, in N·m per (m/s), per m and per (m/s²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PidGains {
    pub kp: f64,
    pub ki: f64,
    pub kd: f64,
}

impl PidGains {
    /// Critically damped PI tuning for the wheel-torque-to-speed plant
    /// `dv/dt = T / (m r_w)` with a 20 rad/s closed-loop bandwidth.
    pub fn for_descriptor(descriptor: &ModelDescriptor) -> Self {
        const BANDWIDTH: f64 = 20.0;
        let plant = descriptor.mass * descriptor.wheel_radius;
        PidGains {
            kp: 2.0 * BANDWIDTH * plant,
            ki: BANDWIDTH * BANDWIDTH * plant,
            kd: 0.0,
        }
    }
}

/// Speed-holding wheel-torque controller.
///
/// The integrator is stored in torque units and clamped to the output limit;
/// the derivative acts on the measurement.
#[derive(Debug, Clone)]
pub struct SpeedController {
    gains: PidGains,
    target: f64,
    limit: f64,
    integral: f64,
    previous: Option<f64>,
}

impl SpeedController {
    pub fn new(gains: PidGains, target: f64, limit: f64) -> Self {
        SpeedController {
            gains,
            target,
            limit,
            integral: 0.0,
            previous: None,
        }
    }

    pub fn limit(&self) -> f64 {
        self.limit
    }

    pub fn update(&mut self, speed: f64, dt: f64) -> f64 {
        let error = self.target - speed;
        self.integral = (self.integral + self.gains.ki * error * dt).clamp(-self.limit, self.limit);
        let rate = self.previous.map_or(0.0, |prev| (speed - prev) / dt);
        self.previous = Some(speed);
        (self.gains.kp * error + self.integral - self.gains.kd * rate).clamp(-self.limit, self.limit)
    }
}
