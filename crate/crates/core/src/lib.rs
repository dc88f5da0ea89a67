//! Quasi-steady-state generation of g-g-g-v acceleration envelopes.
//!
//! A vehicle model is treated as a black box that can only be initialized,
//! stepped forward and observed. For every `(v, a_z, a_x)` grid point the
//! harness emulates the requested longitudinal and vertical acceleration with
//! virtual forces at the center of gravity, holds speed with a PID wheel-torque
//! controller and runs an adaptive open-loop ramp steer until the maximum
//! open-loop-stable lateral acceleration is found.
//!
//! The crate is organized as:
//!
//! * [`types`]: grid, observables and the diagram container,
//! * [`model`]: the black-box model contract and torque routing,
//! * [`models`]: the built-in point-mass and double-track models,
//! * [`maneuver`]: speed hold, gain test, ramp steer and limit detection,
//! * [`sweep`]: parallel evaluation of a whole grid,
//! * [`io`]: run configuration, CSV/JSON export and SVG slices.
//!
//! Runnable walkthroughs of every capability live in the `examples/` directory
//! of this crate.

pub mod io;
pub mod maneuver;
pub mod model;
pub mod models;
pub mod sweep;
pub mod types;

pub use maneuver::{
    detect_limit, external_forces, run_point, run_point_detailed, sideslip_correct, steer_rate,
    ExternalForces, HarnessConfig, LimitKind, Maneuver, ManeuverError, RampTrace, TraceSample,
};
pub use model::{route_torque, DrivenAxle, ModelDescriptor, ModelError, VehicleModel};
pub use models::{DoubleTrack, DoubleTrackConfig, Lookup1d, PointMass, PointMassConfig};
pub use sweep::{run_sweep, slice_gg, GgPoint, SweepOptions, SweepReport};

pub use types::{
    ControlInput, Diagnostic, DiagramMetadata, GggvDiagram, GggvPoint, GridError, LimitStatus,
    Observables, QueryError, SweepGrid,
};

/// Gravitational acceleration in m/s².
pub const GRAVITY: f64 = 9.81;
