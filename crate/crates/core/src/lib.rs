//! Exact-diagonalization dynamics of two Josephson-coupled Bose-Einstein
//! condensates (the two-site Bose-Hubbard dimer).
//!
//! The Hamiltonian is tridiagonal in the fixed-N Fock basis, so the whole
//! pipeline is: build the bands ([`model`]), diagonalize them with an
//! implicit QL solver ([`spectral`]), propagate initial states ([`states`])
//! spectrally and reduce each time slice to observables
//! ([`observables`]). [`analysis`] and [`scenario`] sit on top.

pub mod analysis;
pub mod eigen;
pub mod error;
pub mod io;
pub mod model;
pub mod observables;
pub mod scenario;
pub mod spectral;
pub mod states;

pub use error::{Error, Result};
pub use model::{build_hamiltonian, imbalance_diagonal, CouplingConfig, TridiagonalHamiltonian};
pub use observables::{
    entanglement_entropy, expectation_imbalance, variance_imbalance, ObservableRecord,
};
pub use spectral::{
    eigendecompose, evolve, evolve_series, Propagator, SpectralDecomposition, StateVector,
};
pub use states::{cat, fock, maximally_entangled, InitialState};
