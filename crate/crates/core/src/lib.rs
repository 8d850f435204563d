//! Spectra, eigenstate sizes and vacuum dynamics of truncated generalized
//! squeezing Hamiltonians with real (fractional) squeezing order.
//!
//! The main entry points are [`build_squeeze_chain`], [`central_eigenpair`],
//! [`fit_power_offset`] / [`select_model`] and the sweep driver in [`pipeline`].

pub mod dynamics;
pub mod eigensolve;
pub mod error;
pub mod gamma;
pub mod hamiltonian;
pub mod observables;
pub mod pipeline;
pub mod scaling;

pub use dynamics::{evolve_vacuum, oscillation_amplitude, Trajectory};
pub use eigensolve::{
    central_eigenpair, eigenvalue_by_index, eigenvector_inverse_iteration, full_spectrum_small,
    gershgorin_bound, smallest_positive_eigenvalue, sturm_count, CentralEigenpair, Eigenpair,
};
pub use error::{Error, Result};
pub use gamma::log_gamma;
pub use hamiltonian::{
    build_hierarchical_chain, build_squeeze_chain, coupling, ChainOrigin, SqueezeOrder,
    TridiagonalChain,
};
pub use observables::{
    central_pair_overlap, photon_number, renormalized_number, NumberExpectation,
};
pub use pipeline::{
    analyze_run, emit_plot_data, run_sweep, toy_verify, AnalysisRow, RunManifest, SweepConfig,
    SweepRecord,
};
pub use scaling::{
    fit_line_with_root, fit_log, fit_power_offset, select_model, LineFit, ModelSelection,
    ScalingFit, ScalingModel,
};
