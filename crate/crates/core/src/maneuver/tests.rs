use super::*;
use crate::models::{PointMass, PointMassConfig};
use crate::types::Observables;

fn point_mass() -> PointMass {
    PointMass::new(PointMassConfig::default()).unwrap()
}

fn obs(speed: f64, a_y: f64, yaw_rate: f64, beta: f64) -> Observables {
    Observables {
        speed,
        lateral_accel: a_y,
        yaw_rate,
        sideslip: beta,
        ..Observables::default()
    }
}

fn trace_of(samples: &[(f64, Observables)]) -> RampTrace {
    let samples = samples
        .iter()
        .enumerate()
        .map(|(n, &(steering, observables))| TraceSample {
            time: n as f64 * 0.01,
            steering,
            observables,
            wheel_torques: [0.0; 4],
        })
        .collect();
    RampTrace::from_samples(0.01, samples)
}

#[test]
fn external_force_identities() {
    assert_eq!(external_forces(800.0, 5.0, 9.81), ExternalForces { x: -4000.0, z: 0.0 });
    let f = external_forces(800.0, 0.0, 15.0);
    assert_eq!(f.x, 0.0);
    assert!((f.z - 4152.0).abs() < 1e-9);
    let f = external_forces(800.0, -10.0, 8.0);
    assert_eq!(f.x, 8000.0);
    assert!((f.z + 1448.0).abs() < 1e-9);
}

#[test]
fn steer_rate_divides_and_clamps() {
    let cfg = HarnessConfig::default();
    assert!((steer_rate(50.0, &cfg) - 0.02).abs() < 1e-15);
    assert_eq!(steer_rate(1e6, &cfg), 1e-4);
    assert_eq!(steer_rate(0.5, &cfg), 0.5);
}

#[test]
fn sideslip_correction_values() {
    assert_eq!(sideslip_correct(10.0, 5.0, 0.0), 10.0);
    assert!((sideslip_correct(10.0, 5.0, 0.1) - 9.450_874_57).abs() < 1e-8);
    assert!((sideslip_correct(10.0, -5.0, 0.1) - 10.449_208_74).abs() < 1e-8);
}

#[test]
fn harness_config_validation() {
    assert!(HarnessConfig::default().validate().is_ok());
    let cfg = HarnessConfig {
        oversteer_threshold: 0.0,
        ..HarnessConfig::default()
    };
    assert_eq!(cfg.validate().unwrap_err().field, "oversteer_threshold");
    let cfg = HarnessConfig {
        steer_rate_bounds: [0.5, 0.1],
        ..HarnessConfig::default()
    };
    assert_eq!(cfg.validate().unwrap_err().field, "steer_rate_bounds");
}

#[test]
fn detects_understeer_peak() {
    let cfg = HarnessConfig::default();
    let a_y = [8.0, 9.0, 9.5, 9.3, 9.0];
    let samples: Vec<_> = a_y
        .iter()
        .enumerate()
        .map(|(n, &a)| (0.01 * (n + 1) as f64, obs(30.0, a, a / 30.0, -0.01 * n as f64)))
        .collect();
    let limit = detect_limit(&trace_of(&samples), &cfg).unwrap();
    assert_eq!(limit.kind, LimitKind::UndersteerPeak);
    assert_eq!(limit.lateral_accel, 9.5);
    assert_eq!(limit.sideslip, -0.02);
}

#[test]
fn detects_oversteer_onset_at_predecessor() {
    let cfg = HarnessConfig::default();
    let samples = [
        (0.01, obs(30.0, 3.0, 0.1, 0.001)),
        (0.02, obs(30.0, 4.5, 0.15, 0.002)),
        // v ψ̇ = 6, gap 1.0 > 0.3
        (0.03, obs(30.0, 5.0, 0.2, 0.003)),
        (0.04, obs(30.0, 5.1, 0.3, 0.004)),
    ];
    let limit = detect_limit(&trace_of(&samples), &cfg).unwrap();
    assert_eq!(limit.kind, LimitKind::OversteerOnset);
    assert_eq!(limit.lateral_accel, 4.5);
    assert_eq!(limit.sideslip, 0.002);
}

#[test]
fn rising_trace_has_no_limit() {
    let cfg = HarnessConfig::default();
    let samples: Vec<_> = (1..50)
        .map(|n| {
            let a = 0.3 * n as f64;
            (0.001 * n as f64, obs(30.0, a, a / 30.0, 0.0))
        })
        .collect();
    assert_eq!(detect_limit(&trace_of(&samples), &cfg), Err(DetectorError::NoLimitFound));
    assert_eq!(detect_limit(&trace_of(&[]), &cfg), Err(DetectorError::NoLimitFound));
}

#[test]
fn plateau_is_confirmed_by_steering_growth() {
    let cfg = HarnessConfig::default();
    let samples: Vec<_> = (1..=40)
        .map(|n| {
            let delta = 0.01 * n as f64;
            let a = (300.0 * delta).min(6.0);
            (delta, obs(30.0, a, a / 30.0, 0.0))
        })
        .collect();
    let limit = detect_limit(&trace_of(&samples), &cfg).unwrap();
    assert_eq!(limit.kind, LimitKind::UndersteerPeak);
    assert_eq!(limit.lateral_accel, 6.0);
    assert!((limit.steering - 0.02).abs() < 1e-12);
}

#[test]
fn unstable_first_sample_is_not_a_limit() {
    let cfg = HarnessConfig::default();
    let samples = [(0.01, obs(30.0, 5.0, 0.5, 0.0))];
    assert_eq!(detect_limit(&trace_of(&samples), &cfg), Err(DetectorError::UnstableAtStart));
}

#[test]
fn point_mass_hold_balances_drag() {
    let model = point_mass();
    let cfg = HarnessConfig::default();
    let mut m = Maneuver::start(&model, &cfg, 30.0, external_forces(800.0, 0.0, GRAVITY)).unwrap();
    let hold = m.hold_speed().unwrap();
    // m a_drag r_w
    assert!((hold.holding_torque - 800.0 * 2.0 * 0.3).abs() < 1e-3 * 480.0);
    assert!((m.observables().speed - 30.0).abs() < cfg.speed_tolerance);

    let again = m.hold_speed().unwrap();
    assert!(again.elapsed <= cfg.settle_window + 2e-3);
}

#[test]
fn point_mass_outside_envelope_does_not_settle() {
    let model = point_mass();
    let cfg = HarnessConfig::default();
    // m (a_x + a_drag) = 800 * 20.5 > F_max
    let mut m = Maneuver::start(&model, &cfg, 30.0, external_forces(800.0, 18.5, GRAVITY)).unwrap();
    assert!(matches!(m.hold_speed(), Err(ManeuverError::NotSettled { .. })));
}

#[test]
fn point_mass_gain_is_kinematic() {
    let model = point_mass();
    let cfg = HarnessConfig::default();
    let mut m = Maneuver::start(&model, &cfg, 30.0, external_forces(800.0, 0.0, GRAVITY)).unwrap();
    m.hold_speed().unwrap();
    let kappa = m.gain_test().unwrap();
    // v² / L = 900 / 3
    assert!((kappa - 300.0).abs() < 1e-6, "kappa = {kappa}");
}

#[test]
fn zero_gain_is_rejected() {
    let model = point_mass();
    let cfg = HarnessConfig::default();
    // exactly on the longitudinal edge of the envelope: no lateral force left
    let mut m = Maneuver::start(&model, &cfg, 30.0, external_forces(800.0, 18.0, GRAVITY)).unwrap();
    match m.hold_speed() {
        Ok(_) => assert!(matches!(m.gain_test(), Err(ManeuverError::NonPositiveGain { .. }))),
        Err(e) => assert!(matches!(e, ManeuverError::NotSettled { .. })),
    }
}

#[test]
fn point_mass_apex_of_envelope() {
    let model = point_mass();
    let cfg = HarnessConfig::default();
    let run = run_point_detailed(&model, 30.0, GRAVITY, -2.0, &cfg);
    assert_eq!(run.point.status, LimitStatus::UndersteerLimit);
    let a = run.point.a_y_corr.unwrap();
    assert!((a - 20.0).abs() < 1e-3, "a_y_corr = {a}");
}

#[test]
fn point_mass_beyond_envelope_is_unfeasible() {
    let point = run_point(&point_mass, 30.0, GRAVITY, 19.0, &HarnessConfig::default());
    assert_eq!(point.status, LimitStatus::Unfeasible);
    assert_eq!(point.a_y_corr, None);
    assert_eq!(point.diagnostic, Some(Diagnostic::NotSettled));
}

#[test]
fn invalid_speed_maps_to_unfeasible() {
    let point = run_point(&point_mass, 500.0, GRAVITY, 0.0, &HarnessConfig::default());
    assert_eq!(point.diagnostic, Some(Diagnostic::InvalidSpeed));
}

#[test]
fn slow_ramp_matches_adaptive_ramp() {
    let model = point_mass();
    let cfg = HarnessConfig {
        ramp_timeout: 2000.0,
        ..HarnessConfig::default()
    };
    let adaptive = run_point_detailed(&model, 30.0, GRAVITY, 5.0, &cfg).a_y_max.unwrap();

    let mut m = Maneuver::start(&model, &cfg, 30.0, external_forces(800.0, 5.0, GRAVITY)).unwrap();
    m.hold_speed().unwrap();
    m.gain_test().unwrap();
    let outcome = m.run_ramp(cfg.steer_rate_bounds[0]).unwrap();
    let slow = outcome.limit.unwrap().lateral_accel;
    assert!(((adaptive - slow) / slow).abs() < 1e-3, "{adaptive} vs {slow}");
}

#[test]
fn point_mass_ramp_keeps_kinematic_identity_and_speed() {
    let model = point_mass();
    let cfg = HarnessConfig {
        trace_decimation: 1,
        ..HarnessConfig::default()
    };
    let run = run_point_detailed(&model, 30.0, GRAVITY, 3.0, &cfg);
    assert_eq!(run.point.status, LimitStatus::UndersteerLimit);
    let trace = run.trace.unwrap();
    assert!(trace.len() > 100);
    for s in trace.samples() {
        let o = &s.observables;
        assert!((o.lateral_accel - o.speed * o.yaw_rate).abs() < 1e-9);
        assert!((o.speed - 30.0).abs() < 5.0 * cfg.speed_tolerance);
    }
    let spacing: Vec<f64> = trace.samples().windows(2).map(|w| w[1].time - w[0].time).collect();
    assert!(spacing.iter().all(|d| (d - trace.spacing()).abs() < 1e-9));
}
