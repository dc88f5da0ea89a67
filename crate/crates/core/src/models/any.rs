use crate::model::{ModelDescriptor, ModelError, VehicleModel};
use crate::types::{ControlInput, Observables};

use super::{DoubleTrack, DoubleTrackState, PointMass, PointMassState};

/// Either built-in model behind one type, for runtime model selection.
#[derive(Debug, Clone)]
pub enum AnyModel {
    PointMass(PointMass),
    DoubleTrack(DoubleTrack),
}

#[derive(Debug, Clone)]
pub enum AnyState {
    PointMass(PointMassState),
    DoubleTrack(DoubleTrackState),
}

impl From<PointMass> for AnyModel {
    fn from(m: PointMass) -> Self {
        AnyModel::PointMass(m)
    }
}

impl From<DoubleTrack> for AnyModel {
    fn from(m: DoubleTrack) -> Self {
        AnyModel::DoubleTrack(m)
    }
}

impl VehicleModel for AnyModel {
    type State = AnyState;

    fn descriptor(&self) -> &ModelDescriptor {
        match self {
            AnyModel::PointMass(m) => m.descriptor(),
            AnyModel::DoubleTrack(m) => m.descriptor(),
        }
    }

    fn speed_range(&self) -> (f64, f64) {
        match self {
            AnyModel::PointMass(m) => m.speed_range(),
            AnyModel::DoubleTrack(m) => m.speed_range(),
        }
    }

    fn max_time_step(&self) -> f64 {
        match self {
            AnyModel::PointMass(m) => m.max_time_step(),
            AnyModel::DoubleTrack(m) => m.max_time_step(),
        }
    }

    fn initialize(&self, speed: f64) -> Result<AnyState, ModelError> {
        match self {
            AnyModel::PointMass(m) => m.initialize(speed).map(AnyState::PointMass),
            AnyModel::DoubleTrack(m) => m.initialize(speed).map(AnyState::DoubleTrack),
        }
    }

    fn step(&self, state: &AnyState, input: &ControlInput, dt: f64) -> Result<AnyState, ModelError> {
        match (self, state) {
            (AnyModel::PointMass(m), AnyState::PointMass(s)) => m.step(s, input, dt).map(AnyState::PointMass),
            (AnyModel::DoubleTrack(m), AnyState::DoubleTrack(s)) => m.step(s, input, dt).map(AnyState::DoubleTrack),
            _ => Err(ModelError::InvalidInput("state belongs to a different model".into())),
        }
    }

    fn observe(&self, state: &AnyState) -> Observables {
        match (self, state) {
            (AnyModel::PointMass(m), AnyState::PointMass(s)) => m.observe(s),
            (AnyModel::DoubleTrack(m), AnyState::DoubleTrack(s)) => m.observe(s),
            _ => panic!("state belongs to a different model"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{DoubleTrackConfig, PointMassConfig};

    #[test]
    fn dispatches_to_the_wrapped_model() {
        let pm = PointMass::new(PointMassConfig::default()).unwrap();
        let any = AnyModel::from(pm.clone());
        assert_eq!(any.descriptor(), pm.descriptor());
        let s = any.initialize(20.0).unwrap();
        assert_eq!(any.observe(&s), pm.observe(&pm.initialize(20.0).unwrap()));

        let dt = AnyModel::from(DoubleTrack::new(DoubleTrackConfig::understeer()).unwrap());
        assert!(dt.step(&s, &ControlInput::default(), 1e-3).is_err());
    }
}
