//! Built-in vehicle models.

mod any;
mod double_track;
mod lookup;
mod point_mass;

pub use any::{AnyModel, AnyState};
pub use double_track::{
    make_aero_variant, AeroCoefficient, AeroParams, DoubleTrack, DoubleTrackConfig,
    DoubleTrackState, LoadSolution, TireParams,
};
pub use lookup::Lookup1d;
pub use point_mass::{PointMass, PointMassConfig, PointMassState};
