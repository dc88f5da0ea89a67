//! Run configuration, diagram export and SVG plots.

pub mod config;
pub mod export;
pub mod svg;

pub use config::{parse_config, parse_config_str, ConfigError, ExportFormat, ModelConfig, OutputConfig, Preset, RunConfig, Workers};
pub use export::{
    diagram_csv, diagram_json, export_csv, export_json, export_trace_csv, format_g9, import_json, parse_diagram_json,
    trace_csv, ExportError, CSV_HEADER, TRACE_HEADER,
};
pub use svg::{render_gg_svg, render_points, write_gg_svg, CircleOverlay, SvgError};
