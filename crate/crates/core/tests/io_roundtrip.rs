use gggv::io::{diagram_csv, diagram_json, format_g9, parse_diagram_json};
use gggv::{Diagnostic, DiagramMetadata, GggvDiagram, GggvPoint, HarnessConfig, LimitStatus, SweepGrid};
use proptest::prelude::*;

fn diagram(a_x: Vec<f64>, a_y: Vec<Option<f64>>) -> GggvDiagram {
    let grid = SweepGrid::new(vec![25.0], vec![9.81], a_x.clone()).unwrap();
    let points = a_x
        .iter()
        .zip(&a_y)
        .map(|(&ax, &ay)| match ay {
            Some(a) => GggvPoint {
                v: 25.0,
                a_z: 9.81,
                a_x: ax,
                a_y_corr: Some(a),
                status: LimitStatus::UndersteerLimit,
                kappa: Some(250.0),
                beta_at_limit: Some(-0.01),
                diagnostic: None,
            },
            None => GggvPoint::unfeasible(25.0, 9.81, ax, Diagnostic::NoLimitFound, Some(250.0)),
        })
        .collect();
    GggvDiagram::new(grid, points, DiagramMetadata::new("test", "00", HarnessConfig::default())).unwrap()
}

fn axis() -> impl Strategy<Value = (Vec<f64>, Vec<Option<f64>>)> {
    (1usize..12).prop_flat_map(|n| {
        (
            proptest::collection::vec(0.01f64..5.0, n),
            proptest::collection::vec(proptest::option::of(0.0f64..40.0), n),
        )
            .prop_map(|(steps, a_y)| {
                let mut x = -30.0;
                let a_x = steps.iter().map(|s| {
                    x += s;
                    x
                });
                (a_x.collect(), a_y)
            })
    })
}

proptest! {
    #[test]
    fn json_round_trip_is_exact((a_x, a_y) in axis()) {
        let d = diagram(a_x, a_y);
        prop_assert_eq!(parse_diagram_json(&diagram_json(&d)).unwrap(), d);
    }

    #[test]
    fn csv_keeps_nine_significant_digits((a_x, a_y) in axis()) {
        let d = diagram(a_x, a_y);
        let csv = diagram_csv(&d);
        for (line, p) in csv.lines().skip(1).zip(d.points()) {
            let cols: Vec<&str> = line.split(',').collect();
            prop_assert_eq!(cols.len(), 7);
            let ax: f64 = cols[2].parse().unwrap();
            prop_assert!((ax - p.a_x).abs() <= 1e-8 * p.a_x.abs().max(1e-3));
            match p.a_y_corr {
                Some(a) => {
                    let parsed: f64 = cols[3].parse().unwrap();
                    prop_assert!((parsed - a).abs() <= 1e-8 * a.abs().max(1e-3));
                }
                None => prop_assert_eq!(cols[3], ""),
            }
            prop_assert_eq!(cols[4], p.status.as_str());
        }
    }

    #[test]
    fn g9_parses_back(x in -1e12f64..1e12) {
        let y: f64 = format_g9(x).parse().unwrap();
        prop_assert!((y - x).abs() <= 5e-9 * x.abs());
    }
}
