// Sweeps the point-mass model over 80 longitudinal accelerations and compares
// the result with its closed-form g-g circle.

use gggv::io::{render_gg_svg, CircleOverlay};
use gggv::types::linspace;
use gggv::{run_sweep, HarnessConfig, PointMass, PointMassConfig, SweepGrid, SweepOptions, GRAVITY};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let params = PointMassConfig::default();
    let grid = SweepGrid::new(vec![30.0], vec![GRAVITY], linspace(-30.0, 20.0, 80))?;
    let report = run_sweep(
        || PointMass::new(params.clone()).expect("valid parameters"),
        &grid,
        &HarnessConfig::default(),
        &SweepOptions::with_workers(2),
    );

    let radius = params.force_limit / params.mass;
    let errors: Vec<f64> = report
        .diagram
        .points()
        .iter()
        .filter_map(|p| {
            let exact = (radius * radius - (p.a_x + params.drag_accel).powi(2)).sqrt();
            p.a_y_corr.map(|a| (a - exact).abs())
        })
        .collect();
    let mean = errors.iter().sum::<f64>() / errors.len() as f64;
    let max = errors.iter().copied().fold(0.0, f64::max);
    println!("{} of {} cells feasible", errors.len(), grid.len());
    println!("mean error {mean:.3e} m/s², max error {max:.3e} m/s²");

    let svg = render_gg_svg(&report.diagram, 30.0, GRAVITY, Some(CircleOverlay::for_point_mass(&params)))?;
    let path = std::env::temp_dir().join("gggv_point_mass_slice.svg");
    std::fs::write(&path, svg)?;
    println!("slice written to {}", path.display());

    if max > 5e-3 {
        return Err(format!("max error {max} above 5e-3").into());
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
