// Plugging a user-defined model into the harness. The harness only calls
// `initialize`, `step` and `observe`, so any model that implements
// [`VehicleModel`] can be swept.
//
// The model here is a single-track car with saturating axle forces
// `F = F_max tanh(C α / F_max)` and a softer front axle.

use gggv::model::{check_speed, check_step};
use gggv::types::linspace;
use gggv::{
    route_torque, run_sweep, ControlInput, DrivenAxle, LimitStatus, ModelDescriptor, ModelError, Observables,
    SweepGrid, SweepOptions, VehicleModel, HarnessConfig, GRAVITY,
};

#[derive(Debug, Clone)]
pub struct Bicycle {
    descriptor: ModelDescriptor,
    yaw_inertia: f64,
    l_f: f64,
    l_r: f64,
    cornering_front: f64,
    cornering_rear: f64,
    mu_front: f64,
    mu_rear: f64,
}

#[derive(Debug, Clone)]
pub struct BicycleState {
    speed: f64,
    sideslip: f64,
    yaw_rate: f64,
    a_x: f64,
    a_y: f64,
    axle_loads: (f64, f64),
}

impl Bicycle {
    pub fn new() -> Self {
        let mass = 1200.0;
        Bicycle {
            descriptor: ModelDescriptor {
                name: "bicycle".into(),
                mass,
                driven_axle: DrivenAxle::Rear,
                brake_balance: 0.6,
                wheel_radius: 0.3,
                max_steering: 0.5,
                torque_limit: 2.0 * mass * GRAVITY * 0.3,
            },
            yaw_inertia: 1500.0,
            l_f: 1.2,
            l_r: 1.4,
            cornering_front: 80_000.0,
            cornering_rear: 100_000.0,
            mu_front: 1.1,
            mu_rear: 1.25,
        }
    }

    fn axle_force(cornering: f64, f_max: f64, slip: f64) -> f64 {
        f_max * (cornering * slip / f_max).tanh()
    }
}

impl Default for Bicycle {
    fn default() -> Self {
        Self::new()
    }
}

impl VehicleModel for Bicycle {
    type State = BicycleState;

    fn descriptor(&self) -> &ModelDescriptor {
        &self.descriptor
    }

    fn speed_range(&self) -> (f64, f64) {
        (1.0, 80.0)
    }

    fn initialize(&self, speed: f64) -> Result<BicycleState, ModelError> {
        check_speed(speed, self.speed_range())?;
        let m = self.descriptor.mass;
        let wb = self.l_f + self.l_r;
        Ok(BicycleState {
            speed,
            sideslip: 0.0,
            yaw_rate: 0.0,
            a_x: 0.0,
            a_y: 0.0,
            axle_loads: (m * GRAVITY * self.l_r / wb, m * GRAVITY * self.l_f / wb),
        })
    }

    fn step(&self, s: &BicycleState, input: &ControlInput, dt: f64) -> Result<BicycleState, ModelError> {
        check_step(input, dt, self.max_time_step())?;
        let m = self.descriptor.mass;
        let wb = self.l_f + self.l_r;
        let v = s.speed;
        let delta = input.steering.clamp(-self.descriptor.max_steering, self.descriptor.max_steering);

        let weight = m * GRAVITY + input.external_force_z;
        let fz_f = weight * self.l_r / wb;
        let fz_r = weight * self.l_f / wb;
        let alpha_f = delta - s.sideslip - self.l_f * s.yaw_rate / v;
        let alpha_r = -s.sideslip + self.l_r * s.yaw_rate / v;
        let fy_f = Self::axle_force(self.cornering_front, self.mu_front * fz_f, alpha_f) * delta.cos();
        let fy_r = Self::axle_force(self.cornering_rear, self.mu_rear * fz_r, alpha_r);

        let fx = input.total_torque() / self.descriptor.wheel_radius - 0.4 * v * v + input.external_force_x;
        let a_x = fx / m;
        let a_y = (fy_f + fy_r) / m;
        let sideslip_rate = a_y / v - s.yaw_rate;
        let yaw_accel = (self.l_f * fy_f - self.l_r * fy_r) / self.yaw_inertia;

        let next = BicycleState {
            speed: v + a_x * dt,
            sideslip: s.sideslip + sideslip_rate * dt,
            yaw_rate: s.yaw_rate + yaw_accel * dt,
            a_x,
            a_y,
            axle_loads: (fz_f, fz_r),
        };
        if next.speed.is_finite() && next.sideslip.is_finite() && next.yaw_rate.is_finite() {
            Ok(next)
        } else {
            Err(ModelError::NumericalDivergence)
        }
    }

    fn observe(&self, s: &BicycleState) -> Observables {
        let (f, r) = s.axle_loads;
        Observables {
            speed: s.speed,
            longitudinal_accel: s.a_x,
            lateral_accel: s.a_y,
            yaw_rate: s.yaw_rate,
            sideslip: s.sideslip,
            pitch: 0.0,
            wheel_loads: [f / 2.0, f / 2.0, r / 2.0, r / 2.0],
        }
    }
}

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let model = Bicycle::new();
    println!("torque routing of +400 N·m: {:?}", route_torque(400.0, model.descriptor()));

    let grid = SweepGrid::new(vec![25.0], vec![GRAVITY, 14.0], linspace(-4.0, 2.0, 3))?;
    let report = run_sweep(Bicycle::new, &grid, &HarnessConfig::default(), &SweepOptions::with_workers(2));
    for p in report.diagram.points() {
        println!(
            "a_z {:>5.2}  a_x {:>5.1}  ->  {:<16} a_y_corr {}",
            p.a_z,
            p.a_x,
            p.status.as_str(),
            p.a_y_corr.map_or("-".into(), |a| format!("{a:.3}")),
        );
    }
    if report.count(LimitStatus::Unfeasible) == grid.len() {
        return Err("custom model produced no feasible cell".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
