//! Every example must run to completion.

mod point_mass_validation {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/point_mass_validation.rs"));
}

#[test]
fn point_mass_validation_runs() {
    point_mass_validation::run().expect("point_mass_validation example failed");
}

mod ramp_steer_trace {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/ramp_steer_trace.rs"));
}

#[test]
fn ramp_steer_trace_runs() {
    ramp_steer_trace::run().expect("ramp_steer_trace example failed");
}

mod gggv_sweep {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/gggv_sweep.rs"));
}

#[test]
fn gggv_sweep_runs() {
    gggv_sweep::run().expect("gggv_sweep example failed");
}

mod variable_aero {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/variable_aero.rs"));
}

#[test]
fn variable_aero_runs() {
    variable_aero::run().expect("variable_aero example failed");
}

mod query_diagram {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/query_diagram.rs"));
}

#[test]
fn query_diagram_runs() {
    query_diagram::run().expect("query_diagram example failed");
}

mod custom_model {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/custom_model.rs"));
}

#[test]
fn custom_model_runs() {
    custom_model::run().expect("custom_model example failed");
}

mod gain_map {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/gain_map.rs"));
}

#[test]
fn gain_map_runs() {
    gain_map::run().expect("gain_map example failed");
}
