//! Force-constrained point mass with a closed-form g-g envelope.
//!
//! Longitudinal force comes from the wheel torques, lateral force from the
//! kinematic steering relation `a_y = v² δ / L`. The tire force vector is
//! limited to a circle of radius `F_max` with the longitudinal component
//! served first; the lateral force gets what remains. A constant drag
//! deceleration `a_drag` shifts the resulting g-g circle down.

use serde::{Deserialize, Serialize};

use crate::model::{check_speed, check_step, DrivenAxle, ModelDescriptor, ModelError, VehicleModel};
use crate::types::{ControlInput, Observables};
use crate::GRAVITY;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PointMassConfig {
    /// kg
    pub mass: f64,
    /// m
    pub wheelbase: f64,
    /// m
    pub wheel_radius: f64,
    /// Radius of the tire force circle, N.
    pub force_limit: f64,
    /// Constant drag deceleration, m/s².
    pub drag_accel: f64,
    /// rad
    pub max_steering: f64,
    /// m/s
    pub max_speed: f64,
}

impl Default for PointMassConfig {
    fn default() -> Self {
        PointMassConfig {
            mass: 800.0,
            wheelbase: 3.0,
            wheel_radius: 0.3,
            force_limit: 16_000.0,
            drag_accel: 2.0,
            max_steering: 0.5,
            max_speed: 150.0,
        }
    }
}

impl PointMassConfig {
    pub fn validate(&self) -> Result<(), ModelError> {
        let positive = [
            ("mass", self.mass),
            ("wheelbase", self.wheelbase),
            ("wheel_radius", self.wheel_radius),
            ("force_limit", self.force_limit),
            ("max_steering", self.max_steering),
            ("max_speed", self.max_speed),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(ModelError::InvalidConfig(format!("{name} must be positive")));
            }
        }
        if !(self.drag_accel >= 0.0 && self.drag_accel.is_finite()) {
            return Err(ModelError::InvalidConfig("drag_accel must be non-negative".into()));
        }
        if self.force_limit <= self.mass * self.drag_accel {
            return Err(ModelError::InvalidConfig(
                "force_limit must exceed mass * drag_accel".into(),
            ));
        }
        Ok(())
    }
}

/// Clips a demanded tire force to the circle of radius `f_max`.
///
/// The longitudinal demand is limited to `±f_max` first; the lateral demand
/// is then limited to `sqrt(f_max² - f_x²)`.
pub fn clip_to_envelope(fx: f64, fy: f64, f_max: f64) -> (f64, f64) {
    let fx = fx.clamp(-f_max, f_max);
    let fy_max = (f_max * f_max - fx * fx).max(0.0).sqrt();
    (fx, fy.clamp(-fy_max, fy_max))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointMassState {
    speed: f64,
    longitudinal_accel: f64,
    lateral_accel: f64,
    yaw_rate: f64,
    tire_force: (f64, f64),
    wheel_load: f64,
}

impl PointMassState {
    /// Tire force `(F_x, F_y)` delivered on the last step, N.
    pub fn tire_force(&self) -> (f64, f64) {
        self.tire_force
    }
}

#[derive(Debug, Clone)]
pub struct PointMass {
    config: PointMassConfig,
    descriptor: ModelDescriptor,
}

impl PointMass {
    pub fn new(config: PointMassConfig) -> Result<Self, ModelError> {
        config.validate()?;
        let descriptor = ModelDescriptor {
            name: "point_mass".into(),
            mass: config.mass,
            driven_axle: DrivenAxle::Rear,
            brake_balance: 0.5,
            wheel_radius: config.wheel_radius,
            max_steering: config.max_steering,
            torque_limit: 2.0 * config.force_limit * config.wheel_radius,
        };
        Ok(PointMass { config, descriptor })
    }

    pub fn config(&self) -> &PointMassConfig {
        &self.config
    }

    /// Lateral acceleration on the envelope boundary at longitudinal
    /// acceleration `a_x`, or `None` outside the envelope.
    pub fn envelope_lateral_accel(&self, a_x: f64) -> Option<f64> {
        let r = self.config.force_limit / self.config.mass;
        let dx = a_x + self.config.drag_accel;
        (dx.abs() <= r).then(|| (r * r - dx * dx).sqrt())
    }
}

impl VehicleModel for PointMass {
    type State = PointMassState;

    fn descriptor(&self) -> &ModelDescriptor {
        &self.descriptor
    }

    fn speed_range(&self) -> (f64, f64) {
        (f64::MIN_POSITIVE, self.config.max_speed)
    }

    fn initialize(&self, speed: f64) -> Result<PointMassState, ModelError> {
        check_speed(speed, self.speed_range())?;
        Ok(PointMassState {
            speed,
            longitudinal_accel: 0.0,
            lateral_accel: 0.0,
            yaw_rate: 0.0,
            tire_force: (0.0, 0.0),
            wheel_load: 0.25 * self.config.mass * GRAVITY,
        })
    }

    fn step(&self, state: &PointMassState, input: &ControlInput, dt: f64) -> Result<PointMassState, ModelError> {
        check_step(input, dt, self.max_time_step())?;
        let c = &self.config;
        let v = state.speed;

        let fx_demand = input.total_torque() / c.wheel_radius;
        let fy_demand = c.mass * v * v * input.steering / c.wheelbase;
        let (fx, fy) = clip_to_envelope(fx_demand, fy_demand, c.force_limit);

        let drag = if v > 0.0 { c.mass * c.drag_accel } else { 0.0 };
        let ax = (fx - drag + input.external_force_x) / c.mass;
        let speed = (v + ax * dt).max(0.0);
        let ay = fy / c.mass;
        let yaw_rate = if speed > 0.0 { ay / speed } else { 0.0 };

        let next = PointMassState {
            speed,
            longitudinal_accel: ax,
            lateral_accel: ay,
            yaw_rate,
            tire_force: (fx, fy),
            wheel_load: 0.25 * (c.mass * GRAVITY + input.external_force_z),
        };
        if [speed, ax, ay, yaw_rate, next.wheel_load]
            .iter()
            .all(|x| x.is_finite())
        {
            Ok(next)
        } else {
            Err(ModelError::NumericalDivergence)
        }
    }

    fn observe(&self, state: &PointMassState) -> Observables {
        Observables {
            speed: state.speed,
            longitudinal_accel: state.longitudinal_accel,
            lateral_accel: state.lateral_accel,
            yaw_rate: state.yaw_rate,
            sideslip: 0.0,
            pitch: 0.0,
            wheel_loads: [state.wheel_load; 4],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> PointMass {
        PointMass::new(PointMassConfig::default()).unwrap()
    }

    fn torque_input(total: f64, steering: f64) -> ControlInput {
        ControlInput {
            steering,
            wheel_torques: [0.0, 0.0, total / 2.0, total / 2.0],
            ..ControlInput::default()
        }
    }

    #[test]
    fn interior_forces_pass_through() {
        assert_eq!(clip_to_envelope(3000.0, 4000.0, 16_000.0), (3000.0, 4000.0));
        assert_eq!(clip_to_envelope(-3000.0, -4000.0, 16_000.0), (-3000.0, -4000.0));
    }

    #[test]
    fn over_demand_is_clipped_to_the_circle() {
        let f_max: f64 = 16_000.0;
        // norm 2 F_max, longitudinal part inside the circle
        let fx = 0.6 * f_max;
        let fy = (4.0 * f_max * f_max - fx * fx).sqrt();
        let (cx, cy) = clip_to_envelope(fx, fy, f_max);
        assert!((cx.hypot(cy) - f_max).abs() < 1e-9);
        assert_eq!(cx, fx);
        assert!((cy - 0.8 * f_max).abs() < 1e-9);
        // longitudinal over-demand alone
        assert_eq!(clip_to_envelope(2.0 * f_max, 100.0, f_max), (f_max, 0.0));
    }

    #[test]
    fn initialize_straight_running() {
        let m = model();
        let s = m.initialize(20.0).unwrap();
        let o = m.observe(&s);
        assert_eq!(o.speed, 20.0);
        assert_eq!(o.yaw_rate, 0.0);
        assert_eq!(o.lateral_accel, 0.0);
        assert!(matches!(m.initialize(0.0), Err(ModelError::InvalidSpeed { .. })));
    }

    #[test]
    fn coasting_decelerates() {
        let m = model();
        let s = m.initialize(30.0).unwrap();
        let s = m.step(&s, &ControlInput::default(), 1e-3).unwrap();
        assert!(m.observe(&s).speed < 30.0);
    }

    #[test]
    fn torque_balancing_drag_holds_speed() {
        let m = model();
        let c = m.config().clone();
        let total = c.mass * c.drag_accel * c.wheel_radius;
        let mut s = m.initialize(30.0).unwrap();
        for _ in 0..1000 {
            s = m.step(&s, &torque_input(total, 0.0), 1e-3).unwrap();
        }
        assert!((m.observe(&s).speed - 30.0).abs() < 1e-9);
    }

    #[test]
    fn steady_turn_satisfies_kinematic_identity() {
        let m = model();
        let c = m.config().clone();
        let total = c.mass * c.drag_accel * c.wheel_radius;
        let mut s = m.initialize(30.0).unwrap();
        for _ in 0..100 {
            s = m.step(&s, &torque_input(total, 0.01), 1e-3).unwrap();
            let o = m.observe(&s);
            assert!((o.lateral_accel - o.speed * o.yaw_rate).abs() < 1e-12);
        }
        let o = m.observe(&s);
        // a_y = v² δ / L
        assert!((o.lateral_accel - 900.0 * 0.01 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn non_finite_torque_is_rejected() {
        let m = model();
        let s = m.initialize(30.0).unwrap();
        assert!(matches!(
            m.step(&s, &torque_input(f64::INFINITY, 0.0), 1e-3),
            Err(ModelError::InvalidInput(_))
        ));
    }

    #[test]
    fn rejects_force_limit_below_drag() {
        let cfg = PointMassConfig {
            force_limit: 1000.0,
            ..PointMassConfig::default()
        };
        assert!(PointMass::new(cfg).is_err());
    }

    #[test]
    fn envelope_is_shifted_circle() {
        let m = model();
        assert_eq!(m.envelope_lateral_accel(-2.0), Some(20.0));
        assert_eq!(m.envelope_lateral_accel(18.0), Some(0.0));
        assert_eq!(m.envelope_lateral_accel(18.5), None);
        assert_eq!(m.envelope_lateral_accel(10.0), Some((400.0f64 - 144.0).sqrt()));
    }
}
