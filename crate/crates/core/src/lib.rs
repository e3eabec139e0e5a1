//! Continuous-time classical and quantum walks on random networks.
//!
//! Graphs are drawn from Erdős–Rényi, k-regular configuration-model and
//! complete-minus-m ensembles; the Laplacian serves as both the classical
//! rate matrix and the quantum Hamiltonian.

pub mod continuum;
pub mod ensemble;
pub mod error;
pub mod figures;
pub mod fit;
pub mod generate;
pub mod graph;
pub mod io;
pub mod rng;
pub mod spectral;
pub mod transport;

pub use error::{Error, Result};
pub use generate::{ConnectivityPolicy, GraphModel};
pub use graph::Graph;
pub use spectral::{eigendecompose, laplacian, Spectrum};
pub use transport::{GridSpec, TimeGrid};
