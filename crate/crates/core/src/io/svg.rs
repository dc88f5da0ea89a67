//! SVG plots of g-g cross-sections.

use std::fmt::Write as _;
use std::path::Path;

use crate::models::PointMassConfig;
use crate::sweep::{slice_gg, GgPoint};
use crate::types::{GggvDiagram, GridError};

use super::export::{write_file, ExportError};

const SIZE: f64 = 480.0;
const MARGIN: f64 = 48.0;
const TICK: f64 = 5.0;

/// Closed-form g-g circle drawn behind the markers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleOverlay {
    /// a_x of the circle center, m/s².
    pub center_a_x: f64,
    /// m/s²
    pub radius: f64,
}

impl CircleOverlay {
    pub fn for_point_mass(cfg: &PointMassConfig) -> Self {
        CircleOverlay {
            center_a_x: -cfg.drag_accel,
            radius: cfg.force_limit / cfg.mass,
        }
    }
}

struct Frame {
    half: f64,
}

impl Frame {
    fn x(&self, a_y: f64) -> f64 {
        MARGIN + (a_y + self.half) / (2.0 * self.half) * (SIZE - 2.0 * MARGIN)
    }

    fn y(&self, a_x: f64) -> f64 {
        SIZE - MARGIN - (a_x + self.half) / (2.0 * self.half) * (SIZE - 2.0 * MARGIN)
    }
}

/// SVG text of the `(v, a_z)` cross-section: `a_y` horizontal, `a_x` vertical.
pub fn render_gg_svg(diagram: &GggvDiagram, v: f64, a_z: f64, overlay: Option<CircleOverlay>) -> Result<String, GridError> {
    let points = slice_gg(diagram, v, a_z)?;
    Ok(render_points(&points, v, a_z, overlay))
}

pub fn render_points(points: &[GgPoint], v: f64, a_z: f64, overlay: Option<CircleOverlay>) -> String {
    let mut extent = points.iter().map(|p| p.a_x.abs().max(p.a_y.abs())).fold(TICK, f64::max);
    if let Some(c) = overlay {
        extent = extent.max(c.center_a_x.abs() + c.radius);
    }
    let half = (extent * 1.1 / TICK).ceil() * TICK;
    let f = Frame { half };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="20" text-anchor="middle">v = {} m/s, a_z = {} m/s²</text>"#,
        SIZE / 2.0,
        v,
        a_z
    );

    let n = (half / TICK) as i64;
    for t in -n..=n {
        let val = t as f64 * TICK;
        let (x, y) = (f.x(val), f.y(val));
        let _ = writeln!(
            s,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#eeeeee"/>"##,
            f.y(-half),
            f.y(half)
        );
        let _ = writeln!(
            s,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#eeeeee"/>"##,
            f.x(-half),
            f.x(half)
        );
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{val}</text>"#, SIZE - MARGIN + 14.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{val}</text>"#, MARGIN - 4.0, y + 4.0);
    }
    let _ = writeln!(
        s,
        r##"<g id="axes" stroke="#000000"><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/></g>"##,
        f.x(-half),
        f.y(0.0),
        f.x(half),
        f.y(0.0),
        f.x(0.0),
        f.y(-half),
        f.x(0.0),
        f.y(half)
    );
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">a_y [m/s²]</text>"#, SIZE / 2.0, SIZE - 8.0);
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">a_x [m/s²]</text>"#,
        SIZE / 2.0,
        SIZE / 2.0
    );

    if let Some(c) = overlay {
        let scale = (SIZE - 2.0 * MARGIN) / (2.0 * half);
        let _ = writeln!(
            s,
            r##"<circle id="analytic" cx="{:.2}" cy="{:.2}" r="{:.2}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>"##,
            f.x(0.0),
            f.y(c.center_a_x),
            c.radius * scale
        );
    }

    if !points.is_empty() {
        let path: Vec<String> = points.iter().map(|p| format!("{:.2},{:.2}", f.x(p.a_y), f.y(p.a_x))).collect();
        let _ = writeln!(
            s,
            r##"<polyline id="boundary" points="{}" fill="none" stroke="#d62728" stroke-width="0.8"/>"##,
            path.join(" ")
        );
        let _ = writeln!(s, r##"<g id="markers" fill="#d62728">"##);
        for p in points {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2.5"/>"#, f.x(p.a_y), f.y(p.a_x));
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}

#[derive(Debug, thiserror::Error)]
pub enum SvgError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Export(#[from] ExportError),
}

pub fn write_gg_svg(
    diagram: &GggvDiagram,
    v: f64,
    a_z: f64,
    overlay: Option<CircleOverlay>,
    path: impl AsRef<Path>,
) -> Result<(), SvgError> {
    let text = render_gg_svg(diagram, v, a_z, overlay)?;
    write_file(path.as_ref(), &text)?;
    Ok(())
}
