// A small g-g-g-v sweep of the understeering double-track car, exported as
// CSV, JSON and SVG cross-sections at two vertical accelerations.

use gggv::io::{export_csv, export_json, render_gg_svg};
use gggv::types::linspace;
use gggv::{run_sweep, slice_gg, DoubleTrack, DoubleTrackConfig, HarnessConfig, LimitStatus, SweepGrid, SweepOptions};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let grid = SweepGrid::new(vec![20.0, 35.0], vec![8.0, 15.0], linspace(-24.0, 12.0, 10))?;
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let report = run_sweep(
        || DoubleTrack::new(DoubleTrackConfig::understeer()).expect("valid preset"),
        &grid,
        &HarnessConfig::default(),
        &SweepOptions::with_workers(workers),
    );
    println!(
        "{} cells in {:.2} s: {} understeer, {} oversteer, {} unfeasible",
        grid.len(),
        report.total_runtime.as_secs_f64(),
        report.count(LimitStatus::UndersteerLimit),
        report.count(LimitStatus::OversteerLimit),
        report.count(LimitStatus::Unfeasible),
    );

    let out = std::env::temp_dir().join("gggv_sweep_example");
    std::fs::create_dir_all(&out)?;
    export_csv(&report.diagram, out.join("diagram.csv"))?;
    export_json(&report.diagram, out.join("diagram.json"))?;
    for a_z in [8.0, 15.0] {
        let slice = slice_gg(&report.diagram, 35.0, a_z)?;
        let widest = slice.iter().map(|p| p.a_y).fold(0.0, f64::max);
        println!("v = 35, a_z = {a_z}: {} boundary points, widest a_y {widest:.2} m/s²", slice.len());
        std::fs::write(out.join(format!("slice_az{a_z}.svg")), render_gg_svg(&report.diagram, 35.0, a_z, None)?)?;
    }
    println!("exports in {}", out.display());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
