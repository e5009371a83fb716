//! Coherent-state simulation of a bidirectional teleportation protocol built
//! from beam splitters, photon-number-parity detection and local corrections.

pub mod coherent;
pub mod error;
pub mod fock;
pub mod measurement;
pub mod optics;
pub mod protocol;

pub use num_complex::Complex64 as C64;

pub use coherent::{coherent_overlap, fidelity, inner_product, CoherentTerm, StateVector};
pub use error::{Error, Result};
pub use measurement::{DetectionPattern, Herald, OutcomeClass};
pub use optics::Gate;
