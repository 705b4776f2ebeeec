//! Exact thermal entanglement of mixed spin-1/2 / spin-1 Heisenberg rings.
//!
//! The pipeline is: build a [`Hamiltonian`] from a [`ModelSpec`],
//! [`diagonalize`] it once, then form thermal or ground-manifold states from
//! the spectrum and reduce them to site pairs for [`negativity`].

#[cfg(feature = "cli")]
pub mod cli;
pub mod closed_forms;
pub mod entanglement;
pub mod error;
pub mod io;
pub mod model;
pub mod spectral;
pub mod spin;
pub mod sweep;

pub use entanglement::{negativity, partial_trace, partial_transpose, NegativityResult, PairKind, PairReducedState};
pub use error::{Error, Result};
pub use model::{Hamiltonian, ModelSpec};
pub use spectral::{
    correlator, diagonalize, ground_manifold, internal_energy, thermal_state, GroundManifoldState, SpectralDecomposition,
    SpectralMixture, ThermalState,
};
pub use spin::{GlobalOperator, LocalOperator, SiteLayout, SpinMagnitude};
pub use sweep::{
    find_threshold, run_sweep, threshold_curve, Axis, Parameter, PairSelector, SweepRequest, SweepResult, ThresholdRequest,
    ThresholdResult,
};
