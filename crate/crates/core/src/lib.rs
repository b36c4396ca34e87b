//! Time-optimal two-level quantum evolutions on the Bloch sphere and
//! maximal-coherence polarization optics on the Poincaré sphere.
//!
//! The quantum side synthesizes Hamiltonians that move one pure state to
//! another in the least time allowed by an energy budget. The optical side
//! finds the pair of orthogonal field directions along which a partially
//! polarized beam shows the largest degree of coherence. [`coherence`] checks
//! the structural correspondence between the two problems row by row.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bloch;
pub mod coherence;
pub mod error;
pub mod interference;
pub mod mueller;
pub mod numerics;
pub mod polarization;
pub mod scenario;
pub mod speed_limit;

pub use bloch::{BlochAngles, QuantumState};
pub use coherence::{ConstraintLedger, CorrespondenceReport, RotationSolution};
pub use error::{Error, Result};
pub use mueller::{JonesMatrix, MuellerMatrix};
pub use polarization::{CoherencyMatrix, EllipseAngles, FieldAmplitudes, StokesVector};
pub use numerics::{ComplexMat2, ComplexVec2, RealMat4};
pub use speed_limit::{EfficiencyReport, Hamiltonian2, Route, SpeedLimit, SynthesisResult};

/// Crate version embedded in every CLI output.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
