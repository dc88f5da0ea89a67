//! The black-box vehicle model contract.
//!
//! The harness only ever initializes a model at a speed, steps it forward
//! with a [`ControlInput`] and reads [`Observables`] back. Model state is an
//! opaque associated type; the harness may clone it but never looks inside.

use std::fmt::Debug;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::types::{ControlInput, Observables, Wheel};

/// Default and recommended integration step in s.
pub const DEFAULT_TIME_STEP: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("speed {speed} m/s is outside the model's validity range [{min}, {max}]")]
    InvalidSpeed { speed: f64, min: f64, max: f64 },
    #[error("invalid step: {0}")]
    InvalidInput(String),
    #[error("numerical divergence: model state became non-finite")]
    NumericalDivergence,
    #[error("invalid model configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid lookup table: {0}")]
    InvalidTable(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DrivenAxle {
    Front,
    Rear,
    All,
}

/// Public facts about a model that the harness is allowed to use.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDescriptor {
    pub name: String,
    /// kg
    pub mass: f64,
    pub driven_axle: DrivenAxle,
    /// Front fraction of braking torque, in [0, 1].
    pub brake_balance: f64,
    /// m
    pub wheel_radius: f64,
    /// Largest road-wheel steering angle in rad.
    pub max_steering: f64,
    /// Total wheel torque magnitude at which the speed controller saturates, N·m.
    pub torque_limit: f64,
}

impl ModelDescriptor {
    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |what: &str| Err(ModelError::InvalidConfig(what.to_string()));
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return bad("mass must be positive");
        }
        if !(self.wheel_radius > 0.0 && self.wheel_radius.is_finite()) {
            return bad("wheel_radius must be positive");
        }
        if !(0.0..=1.0).contains(&self.brake_balance) {
            return bad("brake_balance must lie in [0, 1]");
        }
        if !(self.max_steering > 0.0 && self.max_steering.is_finite()) {
            return bad("max_steering must be positive");
        }
        if !(self.torque_limit > 0.0 && self.torque_limit.is_finite()) {
            return bad("torque_limit must be positive");
        }
        Ok(())
    }
}

/// A forward-only vehicle simulation.
///
/// Implementations must be deterministic: replaying the same inputs from the
/// same state yields bit-identical observables.
pub trait VehicleModel {
    type State: Clone + Debug + Send;

    fn descriptor(&self) -> &ModelDescriptor;

    /// Inclusive speed range in m/s for which [`initialize`](Self::initialize) succeeds.
    fn speed_range(&self) -> (f64, f64);

    /// Largest accepted step size in s.
    fn max_time_step(&self) -> f64 {
        DEFAULT_TIME_STEP
    }

    /// Straight running at `speed` with zero steering and zero lateral states.
    fn initialize(&self, speed: f64) -> Result<Self::State, ModelError>;

    fn step(&self, state: &Self::State, input: &ControlInput, dt: f64) -> Result<Self::State, ModelError>;

    fn observe(&self, state: &Self::State) -> Observables;
}

/// Shared precondition checks for `initialize`.
pub fn check_speed(speed: f64, (min, max): (f64, f64)) -> Result<(), ModelError> {
    if speed > 0.0 && speed >= min && speed <= max {
        Ok(())
    } else {
        Err(ModelError::InvalidSpeed { speed, min, max })
    }
}

/// Shared precondition checks for `step`.
pub fn check_step(input: &ControlInput, dt: f64, dt_max: f64) -> Result<(), ModelError> {
    if !(dt > 0.0 && dt <= dt_max) {
        return Err(ModelError::InvalidInput(format!(
            "time step {dt} outside (0, {dt_max}]"
        )));
    }
    if !input.is_finite() {
        return Err(ModelError::InvalidInput("non-finite control input".into()));
    }
    Ok(())
}

/// Distributes a total wheel torque onto the four wheels.
///
/// Positive (drive) torque goes to the driven axle, split evenly left/right
/// and across axles for all-wheel drive. Negative (brake) torque goes to all
/// four wheels according to the brake balance, split evenly left/right.
pub fn route_torque(total: f64, descriptor: &ModelDescriptor) -> [f64; 4] {
    let mut out = [0.0; 4];
    if total >= 0.0 {
        let (front, rear) = match descriptor.driven_axle {
            DrivenAxle::Front => (1.0, 0.0),
            DrivenAxle::Rear => (0.0, 1.0),
            DrivenAxle::All => (0.5, 0.5),
        };
        for w in Wheel::ALL {
            let share = if w.is_front() { front } else { rear };
            out[w as usize] = 0.5 * share * total;
        }
    } else {
        let front = descriptor.brake_balance;
        for w in Wheel::ALL {
            let share = if w.is_front() { front } else { 1.0 - front };
            out[w as usize] = 0.5 * share * total;
        }
    }
    out
}
