// Using a finished diagram as a constraint: trilinear queries between grid
// nodes and a JSON round trip.

use gggv::io::{diagram_json, parse_diagram_json};
use gggv::{run_sweep, DoubleTrack, DoubleTrackConfig, HarnessConfig, SweepGrid, SweepOptions};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let grid = SweepGrid::new(vec![20.0, 30.0], vec![8.0, 12.0], vec![-6.0, -3.0, 0.0])?;
    let report = run_sweep(
        || DoubleTrack::new(DoubleTrackConfig::understeer()).expect("valid preset"),
        &grid,
        &HarnessConfig::default(),
        &SweepOptions::with_workers(2),
    );
    let diagram = report.diagram;

    for (v, a_z, a_x) in [(20.0, 8.0, 0.0), (25.0, 10.0, -1.5), (28.0, 11.0, -4.0)] {
        match diagram.query(v, a_z, a_x) {
            Ok(a_y) => println!("a_y_max(v = {v}, a_z = {a_z}, a_x = {a_x}) = {a_y:.3} m/s²"),
            Err(e) => println!("{e}"),
        }
    }
    println!("{}", diagram.query(45.0, 10.0, 0.0).unwrap_err());

    let text = diagram_json(&diagram);
    let restored = parse_diagram_json(&text)?;
    println!(
        "JSON round trip: {} bytes, equal = {}, model {}, hash {}",
        text.len(),
        restored == diagram,
        restored.metadata().model_name,
        &restored.metadata().config_hash[..12]
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
