//! Benchmark tooling: scenario files, built-in worlds, seeded trials, CSV
//! metrics, traces and SVG rendering.

pub mod scenario;
pub mod svg;
pub mod trace;
pub mod trial;
pub mod worlds;

pub use scenario::{load_scenario, save_scenario, Overrides, PlannerSection, Scenario};
pub use svg::{emit_svg, render_svg};
pub use trace::{load_trace, save_trace, Trace};
pub use trial::{
    median, quantile, read_csv, run_bench, run_trial, summarize, write_csv, write_summary_csv,
    SummaryRow, TrialMetrics, TrialResult, CSV_COLUMNS,
};
pub use worlds::{builtin_world, wallgap2d_optimum, WorldParams, WORLDS};
