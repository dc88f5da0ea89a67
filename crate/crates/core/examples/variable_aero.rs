// Speed-dependent lift and pitch-dependent aero balance: compares the
// feasible longitudinal range against the constant-aero car at 60 m/s.

use gggv::models::make_aero_variant;
use gggv::types::linspace;
use gggv::{run_sweep, DoubleTrack, DoubleTrackConfig, HarnessConfig, SweepGrid, SweepOptions, GRAVITY};

fn feasible_range(config: DoubleTrackConfig, grid: &SweepGrid, cfg: &HarnessConfig) -> Option<(f64, f64)> {
    let report = run_sweep(
        || DoubleTrack::new(config.clone()).expect("valid config"),
        grid,
        cfg,
        &SweepOptions::with_workers(2),
    );
    let feasible: Vec<f64> = report.diagram.points().iter().filter(|p| p.is_feasible()).map(|p| p.a_x).collect();
    Some((*feasible.first()?, *feasible.last()?))
}

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let base = DoubleTrackConfig::understeer();
    let (lift, balance) = DoubleTrackConfig::variable_aero_tables();
    let variant = make_aero_variant(&base, lift.clone(), balance.clone())?;
    println!("lift coefficient over speed: {lift:?}");
    println!("front aero balance over pitch: {balance:?}");

    let grid = SweepGrid::new(vec![60.0], vec![GRAVITY], linspace(-30.0, 20.0, 26))?;
    let cfg = HarnessConfig {
        ramp_timeout: 150.0,
        ..HarnessConfig::default()
    };
    let constant = feasible_range(base, &grid, &cfg).ok_or("baseline has no feasible cell")?;
    let variable = feasible_range(variant, &grid, &cfg).ok_or("variant has no feasible cell")?;
    println!("feasible a_x at 60 m/s, constant aero: [{:.1}, {:.1}] m/s²", constant.0, constant.1);
    println!("feasible a_x at 60 m/s, variable aero: [{:.1}, {:.1}] m/s²", variable.0, variable.1);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
