//! Three-level atom in a photonic-crystal cavity.
//!
//! * [`medium`]: effective-medium permittivities, interface-polariton
//!   dispersion and the frequency-dependent atom-field coupling.
//! * [`dressed`]: exact dressed-state evolution of the atom-field state.
//! * [`entanglement`]: reduced atomic state, pure-state and two-qubit
//!   concurrence, entanglement of formation.
//! * [`phase`]: photon-number and phase distributions with their Shannon
//!   entropies.
//! * [`scenario`]: configuration files, sweeps and CSV output behind the
//!   `simulate` binary.

pub mod dressed;
pub mod entanglement;
pub mod error;
pub mod medium;
pub mod phase;
pub mod scenario;

pub use error::{Error, Result};
