// Lateral acceleration gain κ = Δa_y/Δδ over speed and longitudinal
// acceleration, and the steering rate the harness derives from it.

use gggv::{external_forces, steer_rate, DoubleTrack, DoubleTrackConfig, HarnessConfig, Maneuver, VehicleModel, GRAVITY};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let model = DoubleTrack::new(DoubleTrackConfig::understeer())?;
    let cfg = HarnessConfig::default();
    let mass = model.descriptor().mass;
    let accels = [-10.0, -5.0, 0.0, 5.0];

    print!("{:>8}", "v \\ a_x");
    for a_x in accels {
        print!("{a_x:>10}");
    }
    println!("   (κ in m/s² per rad)");
    for v in [15.0, 25.0, 35.0, 45.0] {
        print!("{v:>8}");
        for a_x in accels {
            let mut m = Maneuver::start(&model, &cfg, v, external_forces(mass, a_x, GRAVITY))?;
            let cell = match m.hold_speed().and_then(|_| m.gain_test()) {
                Ok(kappa) => format!("{kappa:.0}"),
                Err(_) => "-".to_string(),
            };
            print!("{cell:>10}");
        }
        println!();
    }

    for kappa in [100.0, 1000.0, 1e5] {
        println!("κ = {kappa:>8}: steering rate {:.2e} rad/s", steer_rate(kappa, &cfg));
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
