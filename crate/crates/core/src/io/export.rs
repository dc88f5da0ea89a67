//! CSV and JSON export of diagrams and ramp traces.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::maneuver::RampTrace;
use crate::types::{DiagramMetadata, GggvDiagram, GggvPoint, SweepGrid};

pub const CSV_HEADER: &str = "v,a_z,a_x,a_y_corr,status,kappa,beta_at_limit";
pub const TRACE_HEADER: &str = "t,delta,v,a_y,psi_dot,beta,T_total";

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed diagram document: {0}")]
    Format(String),
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), ExportError> {
    std::fs::write(path, contents).map_err(|source| ExportError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Formats like C's `%.9g`.
pub fn format_g9(x: f64) -> String {
    const DIGITS: i32 = 9;
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= DIGITS {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(format_g9).unwrap_or_default()
}

/// CSV text of a diagram in grid-index order.
pub fn diagram_csv(diagram: &GggvDiagram) -> String {
    let mut out = String::with_capacity(64 * (diagram.points().len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for p in diagram.points() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            format_g9(p.v),
            format_g9(p.a_z),
            format_g9(p.a_x),
            opt(p.a_y_corr),
            p.status.as_str(),
            opt(p.kappa),
            opt(p.beta_at_limit),
        );
    }
    out
}

pub fn export_csv(diagram: &GggvDiagram, path: impl AsRef<Path>) -> Result<(), ExportError> {
    write_file(path.as_ref(), &diagram_csv(diagram))
}

pub fn trace_csv(trace: &RampTrace) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for s in trace.samples() {
        let o = &s.observables;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            format_g9(s.time),
            format_g9(s.steering),
            format_g9(o.speed),
            format_g9(o.lateral_accel),
            format_g9(o.yaw_rate),
            format_g9(o.sideslip),
            format_g9(s.total_torque()),
        );
    }
    out
}

pub fn export_trace_csv(trace: &RampTrace, path: impl AsRef<Path>) -> Result<(), ExportError> {
    write_file(path.as_ref(), &trace_csv(trace))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramDocument {
    grid: SweepGrid,
    /// `points[i_v][i_az][i_ax]`
    points: Vec<Vec<Vec<GggvPoint>>>,
    metadata: DiagramMetadata,
}

pub fn diagram_json(diagram: &GggvDiagram) -> String {
    let (nv, nz, nx) = diagram.grid().shape();
    let points = (0..nv)
        .map(|i| {
            (0..nz)
                .map(|j| (0..nx).map(|k| diagram.get(i, j, k).clone()).collect())
                .collect()
        })
        .collect();
    let doc = DiagramDocument {
        grid: diagram.grid().clone(),
        points,
        metadata: diagram.metadata().clone(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable diagram") + "\n"
}

pub fn export_json(diagram: &GggvDiagram, path: impl AsRef<Path>) -> Result<(), ExportError> {
    write_file(path.as_ref(), &diagram_json(diagram))
}

pub fn parse_diagram_json(text: &str) -> Result<GggvDiagram, ExportError> {
    let doc: DiagramDocument = serde_json::from_str(text).map_err(|e| ExportError::Format(e.to_string()))?;
    let (nv, nz, nx) = doc.grid.shape();
    let dims_ok = doc.points.len() == nv
        && doc
            .points
            .iter()
            .all(|plane| plane.len() == nz && plane.iter().all(|row| row.len() == nx));
    if !dims_ok {
        return Err(ExportError::Format("point array does not match the grid shape".into()));
    }
    let points = doc.points.into_iter().flatten().flatten().collect();
    GggvDiagram::new(doc.grid, points, doc.metadata).map_err(|e| ExportError::Format(e.to_string()))
}

pub fn import_json(path: impl AsRef<Path>) -> Result<GggvDiagram, ExportError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ExportError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_diagram_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maneuver::HarnessConfig;
    use crate::types::{Diagnostic, LimitStatus};

    fn diagram() -> GggvDiagram {
        let grid = SweepGrid::new(vec![30.0], vec![9.81], vec![-2.0, 19.0]).unwrap();
        let points = vec![
            GggvPoint {
                v: 30.0,
                a_z: 9.81,
                a_x: -2.0,
                a_y_corr: Some(19.999_712_345_678),
                status: LimitStatus::UndersteerLimit,
                kappa: Some(300.0),
                beta_at_limit: Some(0.0),
                diagnostic: None,
            },
            GggvPoint::unfeasible(30.0, 9.81, 19.0, Diagnostic::NotSettled, None),
        ];
        GggvDiagram::new(grid, points, DiagramMetadata::new("point_mass", "abc", HarnessConfig::default())).unwrap()
    }

    #[test]
    fn g9_matches_printf() {
        let cases = [
            (1.0, "1"),
            (0.1, "0.1"),
            (-2.5, "-2.5"),
            (9.81, "9.81"),
            (123456789.0, "123456789"),
            (1234567890.0, "1.23456789e+09"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (19.999712345678, "19.9997123"),
            (2.0 / 3.0, "0.666666667"),
            (999999999.6, "1e+09"),
            (-0.0, "-0"),
        ];
        for (x, want) in cases {
            assert_eq!(format_g9(x), want, "{x}");
        }
    }

    #[test]
    fn csv_layout() {
        let csv = diagram_csv(&diagram());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "30,9.81,-2,19.9997123,understeer_limit,300,0");
        assert_eq!(lines[2], "30,9.81,19,,unfeasible,,");
        assert!(!csv.contains('\r'));
        assert_eq!(csv, diagram_csv(&diagram()));
    }

    #[test]
    fn json_round_trip() {
        let d = diagram();
        let text = diagram_json(&d);
        assert_eq!(parse_diagram_json(&text).unwrap(), d);
        assert!(text.contains("\"oversteer_threshold\": 0.3"));
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["points"].as_array().unwrap().len(), 1);
        assert_eq!(value["points"][0][0].as_array().unwrap().len(), 2);
    }

    #[test]
    fn json_with_wrong_shape_is_rejected() {
        let text = diagram_json(&diagram()).replacen("\"longitudinal_accels\": [\n      -2.0,", "\"longitudinal_accels\": [\n      -3.0, -2.0,", 1);
        assert!(matches!(parse_diagram_json(&text), Err(ExportError::Format(_))));
    }

    #[test]
    fn files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let d = diagram();
        export_csv(&d, dir.path().join("d.csv")).unwrap();
        export_json(&d, dir.path().join("d.json")).unwrap();
        assert_eq!(import_json(dir.path().join("d.json")).unwrap(), d);
        assert!(matches!(import_json(dir.path().join("missing.json")), Err(ExportError::Io { .. })));
    }
}
