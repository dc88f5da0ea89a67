// One ramp-steer experiment on an understeering and an oversteering car at
// 30 m/s: speed hold, gain test, adaptive ramp and limit detection.

use gggv::io::trace_csv;
use gggv::{run_point_detailed, DoubleTrack, DoubleTrackConfig, HarnessConfig, LimitKind, GRAVITY};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = HarnessConfig::default();
    for preset in [DoubleTrackConfig::understeer(), DoubleTrackConfig::oversteer()] {
        let name = preset.name.clone();
        let model = DoubleTrack::new(preset)?;
        let run = run_point_detailed(&model, 30.0, GRAVITY, 0.0, &cfg);
        let limit = run.limit.ok_or("no limit found")?;
        let trace = run.trace.ok_or("no trace")?;

        let kind = match limit.kind {
            LimitKind::UndersteerPeak => "a_y peak (front axle saturated)",
            LimitKind::OversteerOnset => "yaw mismatch (rear axle saturated)",
        };
        println!("{name}:");
        println!("  gain kappa        {:.1} m/s² per rad", run.point.kappa.unwrap_or(f64::NAN));
        println!("  limit             {kind} at t = {:.2} s, delta = {:.4} rad", limit.time, limit.steering);
        println!("  a_y_max           {:.4} m/s²", limit.lateral_accel);
        println!("  a_y_corr          {:.4} m/s²", run.point.a_y_corr.unwrap_or(f64::NAN));
        println!("  sideslip          {:.4} rad", limit.sideslip);
        println!("  max speed error   {:.2e} m/s", run.max_speed_error.unwrap_or(f64::NAN));

        let first = &trace.samples()[0];
        let last = trace.samples().last().expect("non-empty trace");
        println!(
            "  wheel torque      {:.0} N·m at ramp start, {:.0} N·m at the end",
            first.total_torque(),
            last.total_torque()
        );
        let path = std::env::temp_dir().join(format!("gggv_trace_{name}.csv"));
        std::fs::write(&path, trace_csv(&trace))?;
        println!("  trace             {} samples in {}", trace.len(), path.display());
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
