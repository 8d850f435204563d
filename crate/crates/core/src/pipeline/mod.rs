//! Sweeps over `(n, N)`, scaling analysis, plot data and the hierarchical toy checks.

pub mod analysis;
pub mod config;
pub mod plot;
pub mod sweep;
pub mod toy;

pub use analysis::{analyze_run, AlphaLines, AlphaWindows, AnalysisOutcome, AnalysisRow};
pub use config::SweepConfig;
pub use plot::emit_plot_data;
pub use sweep::{
    compute_cell, read_manifest, read_sweep_csv, run_sweep, RunManifest, SweepOutcome, SweepRecord,
};
pub use toy::{toy_verify, ToyCase, ToyReport};
