//! Double-track (four-wheel) planar vehicle model.
//!
//! Planar states `(v_x, v_y, yaw_rate)` are integrated with explicit Euler.
//! Vertical loads are solved quasi-statically each step from the tire forces
//! of the previous step, so there are no suspension states. Steering reaches
//! the wheels through a first-order actuator lag.
//!
//! Tires use a pure-slip magic-formula curve for lateral force,
//! `F_y = μ F_z sin(C atan(B α))`. Longitudinal force is the demanded wheel
//! force `T / r_w` up to `μ F_z`; beyond that the delivered force falls off
//! towards a sliding level. Combined slip scales the lateral force with the
//! friction ellipse left over by the longitudinal force.

use serde::{Deserialize, Serialize};

use crate::model::{check_speed, check_step, DrivenAxle, ModelDescriptor, ModelError, VehicleModel};
use crate::models::Lookup1d;
use crate::types::{ControlInput, Observables, Wheel};
use crate::GRAVITY;

/// Delivered/peak force ratio a fully over-demanded wheel settles at.
const SLIDING_FLOOR: f64 = 0.6;
/// Lower bound on the load-sensitivity friction scale.
const MIN_FRICTION_SCALE: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TireParams {
    /// Peak friction coefficient μ at nominal load.
    pub peak_friction: f64,
    /// Magic-formula stiffness factor B, 1/rad.
    pub stiffness_factor: f64,
    /// Magic-formula shape factor C.
    pub shape_factor: f64,
    /// Magic-formula curvature factor E, at most 1. Negative values sharpen the peak.
    #[serde(default)]
    pub curvature_factor: f64,
    /// Relative friction loss per unit of relative load above nominal. Zero
    /// makes tire force capacity proportional to load.
    pub load_sensitivity: f64,
    /// N
    pub nominal_load: f64,
    /// Slope of the delivered-force drop past the longitudinal peak, per unit
    /// of over-demand ratio.
    pub slide_falloff: f64,
}

impl TireParams {
    fn validate(&self, axle: &str) -> Result<(), ModelError> {
        let positive = [
            ("peak_friction", self.peak_friction),
            ("stiffness_factor", self.stiffness_factor),
            ("shape_factor", self.shape_factor),
            ("nominal_load", self.nominal_load),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(ModelError::InvalidConfig(format!("{axle}.{name} must be positive")));
            }
        }
        if !(self.curvature_factor <= 1.0) {
            return Err(ModelError::InvalidConfig(format!("{axle}.curvature_factor must not exceed 1")));
        }
        if !(self.load_sensitivity >= 0.0 && self.slide_falloff >= 0.0) {
            return Err(ModelError::InvalidConfig(format!(
                "{axle}.load_sensitivity and slide_falloff must be non-negative"
            )));
        }
        Ok(())
    }

    /// Force capacity `μ_eff F_z` at vertical load `fz`.
    pub fn capacity(&self, fz: f64) -> f64 {
        if fz <= 0.0 {
            return 0.0;
        }
        let scale = 1.0 - self.load_sensitivity * (fz / self.nominal_load - 1.0);
        self.peak_friction * scale.max(MIN_FRICTION_SCALE) * fz
    }

    /// Wheel-frame `(F_x, F_y)` for a load, a demanded longitudinal force and
    /// a slip angle.
    pub fn forces(&self, fz: f64, demanded_fx: f64, slip_angle: f64) -> (f64, f64) {
        let cap = self.capacity(fz);
        if cap <= 0.0 {
            return (0.0, 0.0);
        }
        let usage = demanded_fx / cap;
        let fx = if usage.abs() <= 1.0 {
            demanded_fx
        } else {
            let ratio = (1.0 - self.slide_falloff * (usage.abs() - 1.0)).max(SLIDING_FLOOR);
            cap * ratio * usage.signum()
        };
        let used = usage.abs().min(1.0);
        let x = self.stiffness_factor * slip_angle;
        let bent = x - self.curvature_factor * (x - x.atan());
        let fy_pure = cap * (self.shape_factor * bent.atan()).sin();
        (fx, fy_pure * (1.0 - used * used).sqrt())
    }
}

/// A coefficient that is either constant or looked up from a table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AeroCoefficient {
    Constant(f64),
    Table(Lookup1d),
}

impl AeroCoefficient {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            AeroCoefficient::Constant(c) => *c,
            AeroCoefficient::Table(t) => t.eval(x),
        }
    }

    fn values(&self) -> Vec<f64> {
        match self {
            AeroCoefficient::Constant(c) => vec![*c],
            AeroCoefficient::Table(t) => t.knots().iter().map(|k| k.1).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AeroParams {
    /// m²
    pub frontal_area: f64,
    /// kg/m³
    pub air_density: f64,
    pub drag_coefficient: f64,
    /// Lift (downforce) coefficient, constant or over speed in m/s.
    pub lift_coefficient: AeroCoefficient,
    /// Front share of downforce, constant or over pitch in rad (nose-down positive).
    pub balance: AeroCoefficient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DoubleTrackConfig {
    pub name: String,
    /// kg
    pub mass: f64,
    /// kg·m²
    pub yaw_inertia: f64,
    /// m
    pub wheelbase: f64,
    /// CoG to front axle, m.
    pub front_axle_distance: f64,
    /// m
    pub track_width: f64,
    /// m
    pub cog_height: f64,
    /// Front share of lateral load transfer, in [0, 1].
    pub roll_stiffness_front_fraction: f64,
    /// N·m/rad
    pub pitch_stiffness: f64,
    pub front_tire: TireParams,
    pub rear_tire: TireParams,
    pub aero: AeroParams,
    pub rolling_resistance: f64,
    /// m
    pub wheel_radius: f64,
    pub driven_axle: DrivenAxle,
    /// Front share of braking torque.
    pub brake_balance: f64,
    /// rad
    pub max_steering: f64,
    /// Steering actuator first-order time constant, s.
    pub steering_time_constant: f64,
    /// m/s
    pub max_speed: f64,
}

impl DoubleTrackConfig {
    /// Rear-driven race car that saturates the front axle first.
    ///
    /// Tires are load-proportional (zero load sensitivity).
    pub fn understeer() -> Self {
        let tire = |mu| TireParams {
            peak_friction: mu,
            stiffness_factor: 14.0,
            shape_factor: 1.6,
            curvature_factor: 0.0,
            load_sensitivity: 0.0,
            nominal_load: 2000.0,
            slide_falloff: 2.0,
        };
        DoubleTrackConfig {
            name: "double_track_understeer".into(),
            mass: 800.0,
            yaw_inertia: 1000.0,
            wheelbase: 2.97,
            front_axle_distance: 1.72,
            track_width: 1.6,
            cog_height: 0.3,
            roll_stiffness_front_fraction: 0.55,
            pitch_stiffness: 400_000.0,
            front_tire: tire(1.5),
            rear_tire: tire(1.65),
            aero: AeroParams {
                frontal_area: 1.0,
                air_density: 1.2,
                drag_coefficient: 0.9,
                lift_coefficient: AeroCoefficient::Constant(3.0),
                balance: AeroCoefficient::Constant(0.45),
            },
            rolling_resistance: 0.012,
            wheel_radius: 0.3,
            driven_axle: DrivenAxle::Rear,
            brake_balance: 0.55,
            max_steering: 0.4,
            steering_time_constant: 0.02,
            max_speed: 100.0,
        }
    }

    /// Same car with reduced rear grip, so the rear axle saturates first.
    pub fn oversteer() -> Self {
        let mut cfg = Self::understeer();
        cfg.name = "double_track_oversteer".into();
        cfg.front_tire.peak_friction = 1.65;
        cfg.rear_tire.peak_friction = 1.3;
        cfg
    }

    /// Built-in `(c_l over speed, balance over pitch)` tables for the
    /// variable-aero variant: downforce grows with speed and the balance
    /// moves forward as the car pitches nose-down.
    pub fn variable_aero_tables() -> (Vec<(f64, f64)>, Vec<(f64, f64)>) {
        (
            vec![(10.0, 2.6), (30.0, 2.9), (50.0, 3.1), (70.0, 3.3)],
            vec![(-0.02, 0.35), (0.0, 0.45), (0.02, 0.55)],
        )
    }

    pub fn l_r(&self) -> f64 {
        self.wheelbase - self.front_axle_distance
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let positive = [
            ("mass", self.mass),
            ("yaw_inertia", self.yaw_inertia),
            ("wheelbase", self.wheelbase),
            ("track_width", self.track_width),
            ("cog_height", self.cog_height),
            ("pitch_stiffness", self.pitch_stiffness),
            ("wheel_radius", self.wheel_radius),
            ("max_steering", self.max_steering),
            ("max_speed", self.max_speed),
            ("aero.frontal_area", self.aero.frontal_area),
            ("aero.air_density", self.aero.air_density),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(ModelError::InvalidConfig(format!("{name} must be positive")));
            }
        }
        if !(self.front_axle_distance > 0.0 && self.front_axle_distance < self.wheelbase) {
            return Err(ModelError::InvalidConfig(
                "front_axle_distance must lie strictly inside the wheelbase".into(),
            ));
        }
        for (name, value) in [
            ("roll_stiffness_front_fraction", self.roll_stiffness_front_fraction),
            ("brake_balance", self.brake_balance),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(ModelError::InvalidConfig(format!("{name} must lie in [0, 1]")));
            }
        }
        if !(self.steering_time_constant >= 0.0
            && self.rolling_resistance >= 0.0
            && self.aero.drag_coefficient >= 0.0)
        {
            return Err(ModelError::InvalidConfig(
                "steering_time_constant, rolling_resistance and drag_coefficient must be non-negative".into(),
            ));
        }
        if self.aero.balance.values().iter().any(|b| !(0.0..=1.0).contains(b)) {
            return Err(ModelError::InvalidConfig("aero.balance must lie in [0, 1]".into()));
        }
        if self.aero.lift_coefficient.values().iter().any(|c| !c.is_finite()) {
            return Err(ModelError::InvalidConfig("aero.lift_coefficient must be finite".into()));
        }
        self.front_tire.validate("front_tire")?;
        self.rear_tire.validate("rear_tire")?;
        Ok(())
    }
}

/// Copy of `base` with speed-dependent lift and pitch-dependent balance.
pub fn make_aero_variant(
    base: &DoubleTrackConfig,
    c_l_table: Vec<(f64, f64)>,
    balance_table: Vec<(f64, f64)>,
) -> Result<DoubleTrackConfig, ModelError> {
    let lift = Lookup1d::new(c_l_table)?;
    let balance = Lookup1d::new(balance_table)?;
    if balance.knots().iter().any(|k| !(0.0..=1.0).contains(&k.1)) {
        return Err(ModelError::InvalidTable("balance values must lie in [0, 1]".into()));
    }
    let mut cfg = base.clone();
    cfg.name = format!("{}_variable_aero", base.name);
    cfg.aero.lift_coefficient = AeroCoefficient::Table(lift);
    cfg.aero.balance = AeroCoefficient::Table(balance);
    Ok(cfg)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DoubleTrackState {
    vx: f64,
    vy: f64,
    yaw_rate: f64,
    steering: f64,
    /// Body-frame tire force sums of the last step, N.
    tire_force_x: f64,
    tire_force_y: f64,
    ax: f64,
    ay: f64,
    wheel_loads: [f64; 4],
    pitch: f64,
}

impl DoubleTrackState {
    /// Mirror image across the vehicle's longitudinal plane.
    pub fn mirrored(&self) -> Self {
        let l = self.wheel_loads;
        DoubleTrackState {
            vy: -self.vy,
            yaw_rate: -self.yaw_rate,
            steering: -self.steering,
            tire_force_y: -self.tire_force_y,
            ay: -self.ay,
            wheel_loads: [l[1], l[0], l[3], l[2]],
            ..self.clone()
        }
    }

    pub fn steering(&self) -> f64 {
        self.steering
    }
}

/// Result of one quasi-static vertical load solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadSolution {
    pub wheel_loads: [f64; 4],
    pub downforce: f64,
    pub drag: f64,
    pub aero_balance: f64,
    /// rad, nose-down positive
    pub pitch: f64,
}

#[derive(Debug, Clone)]
pub struct DoubleTrack {
    config: DoubleTrackConfig,
    descriptor: ModelDescriptor,
}

impl DoubleTrack {
    pub fn new(config: DoubleTrackConfig) -> Result<Self, ModelError> {
        config.validate()?;
        let mu = config
            .front_tire
            .peak_friction
            .max(config.rear_tire.peak_friction);
        let descriptor = ModelDescriptor {
            name: config.name.clone(),
            mass: config.mass,
            driven_axle: config.driven_axle,
            brake_balance: config.brake_balance,
            wheel_radius: config.wheel_radius,
            max_steering: config.max_steering,
            torque_limit: 4.0 * mu * config.mass * GRAVITY * config.wheel_radius,
        };
        Ok(DoubleTrack { config, descriptor })
    }

    pub fn config(&self) -> &DoubleTrackConfig {
        &self.config
    }

    fn wheel_position(&self, w: Wheel) -> (f64, f64) {
        let c = &self.config;
        let x = if w.is_front() {
            c.front_axle_distance
        } else {
            -c.l_r()
        };
        let y = if w.is_left() {
            0.5 * c.track_width
        } else {
            -0.5 * c.track_width
        };
        (x, y)
    }

    /// Quasi-static vertical loads for `state` under an external vertical force.
    ///
    /// Loads sum to `m g + downforce + f_z_ext`; longitudinal and lateral
    /// transfer come from the previous step's tire forces acting at ground
    /// level against everything else at CoG height.
    pub fn load_solve(&self, state: &DoubleTrackState, f_z_ext: f64) -> LoadSolution {
        let c = &self.config;
        let speed = state.vx.hypot(state.vy);
        let q = 0.5 * c.aero.air_density * c.aero.frontal_area * state.vx * state.vx;
        let downforce = q * c.aero.lift_coefficient.eval(speed);
        let drag = q * c.aero.drag_coefficient;
        let pitch = -state.tire_force_x * c.cog_height / c.pitch_stiffness;
        let balance = c.aero.balance.eval(pitch);

        let static_front = c.l_r() / c.wheelbase;
        let weight = c.mass * GRAVITY + f_z_ext;
        let long_transfer = state.tire_force_x * c.cog_height / c.wheelbase;
        let front = weight * static_front + downforce * balance - long_transfer;
        let rear = weight * (1.0 - static_front) + downforce * (1.0 - balance) + long_transfer;

        let roll = state.tire_force_y * c.cog_height / c.track_width;
        let front_lat = c.roll_stiffness_front_fraction * roll;
        let rear_lat = (1.0 - c.roll_stiffness_front_fraction) * roll;

        LoadSolution {
            wheel_loads: [
                0.5 * front - front_lat,
                0.5 * front + front_lat,
                0.5 * rear - rear_lat,
                0.5 * rear + rear_lat,
            ],
            downforce,
            drag,
            aero_balance: balance,
            pitch,
        }
    }
}

impl VehicleModel for DoubleTrack {
    type State = DoubleTrackState;

    fn descriptor(&self) -> &ModelDescriptor {
        &self.descriptor
    }

    fn speed_range(&self) -> (f64, f64) {
        (1.0, self.config.max_speed)
    }

    fn initialize(&self, speed: f64) -> Result<DoubleTrackState, ModelError> {
        check_speed(speed, self.speed_range())?;
        let mut state = DoubleTrackState {
            vx: speed,
            vy: 0.0,
            yaw_rate: 0.0,
            steering: 0.0,
            tire_force_x: 0.0,
            tire_force_y: 0.0,
            ax: 0.0,
            ay: 0.0,
            wheel_loads: [0.0; 4],
            pitch: 0.0,
        };
        let loads = self.load_solve(&state, 0.0);
        state.wheel_loads = loads.wheel_loads;
        state.pitch = loads.pitch;
        Ok(state)
    }

    fn step(&self, s: &DoubleTrackState, input: &ControlInput, dt: f64) -> Result<DoubleTrackState, ModelError> {
        check_step(input, dt, self.max_time_step())?;
        let c = &self.config;

        let command = input.steering.clamp(-c.max_steering, c.max_steering);
        let lag = if c.steering_time_constant > 0.0 {
            1.0 - (-dt / c.steering_time_constant).exp()
        } else {
            1.0
        };
        let steering = s.steering + (command - s.steering) * lag;

        let loads = self.load_solve(s, input.external_force_z);

        let mut fx_sum = 0.0;
        let mut fy_sum = 0.0;
        let mut yaw_moment = 0.0;
        let mut load_sum = 0.0;
        for w in Wheel::ALL {
            let (x, y) = self.wheel_position(w);
            let (tire, delta) = if w.is_front() {
                (&c.front_tire, steering)
            } else {
                (&c.rear_tire, 0.0)
            };
            let fz = loads.wheel_loads[w as usize].max(0.0);
            load_sum += fz;
            let u = s.vx - y * s.yaw_rate;
            let lateral = s.vy + x * s.yaw_rate;
            let slip = delta - lateral.atan2(u);
            let demanded = input.wheel_torques[w as usize] / c.wheel_radius;
            let (fx, fy) = tire.forces(fz, demanded, slip);
            let (sin, cos) = delta.sin_cos();
            let fxb = fx * cos - fy * sin;
            let fyb = fx * sin + fy * cos;
            fx_sum += fxb;
            fy_sum += fyb;
            yaw_moment += x * fyb - y * fxb;
        }

        let direction = s.vx.signum();
        let resistance = (loads.drag + c.rolling_resistance * load_sum) * direction;
        let ax = (fx_sum - resistance + input.external_force_x) / c.mass;
        let ay = fy_sum / c.mass;

        let next = DoubleTrackState {
            vx: s.vx + dt * (ax + s.vy * s.yaw_rate),
            vy: s.vy + dt * (ay - s.vx * s.yaw_rate),
            yaw_rate: s.yaw_rate + dt * yaw_moment / c.yaw_inertia,
            steering,
            tire_force_x: fx_sum,
            tire_force_y: fy_sum,
            ax,
            ay,
            wheel_loads: loads.wheel_loads,
            pitch: loads.pitch,
        };
        if [next.vx, next.vy, next.yaw_rate, ax, ay]
            .iter()
            .chain(next.wheel_loads.iter())
            .all(|v| v.is_finite())
        {
            Ok(next)
        } else {
            Err(ModelError::NumericalDivergence)
        }
    }

    fn observe(&self, s: &DoubleTrackState) -> Observables {
        Observables {
            speed: s.vx.hypot(s.vy),
            longitudinal_accel: s.ax,
            lateral_accel: s.ay,
            yaw_rate: s.yaw_rate,
            sideslip: s.vy.atan2(s.vx),
            pitch: s.pitch,
            wheel_loads: s.wheel_loads,
        }
    }
}
