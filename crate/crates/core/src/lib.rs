//! Spin-j kicked-top simulation with entanglement upper bounds.
//!
//! The crate is organised bottom-up:
//!
//! * [`spin_algebra`] builds angular-momentum matrices, spin coherent states
//!   and expectation-value geometry in the Dicke basis.
//! * [`classical_top`] is the stroboscopic classical map, its tangent
//!   dynamics, orbit stability and Lyapunov classification.
//! * [`quantum_dynamics`] builds the one-period Floquet unitary and
//!   propagates states kick by kick.
//! * [`entanglement_bounds`] reduces symmetric states to `q` qubits, computes
//!   von Neumann entropies and trace distances, and evaluates the
//!   Fannes-Audenaert bound against coherent-state references.
//! * [`oracle`] is a brute-force tensor-product implementation used to
//!   validate the symmetric-subspace shortcuts on small systems.

pub mod classical_top;
mod combinatorics;
pub mod entanglement_bounds;
mod error;
pub mod oracle;
pub mod quantum_dynamics;
pub mod spin_algebra;

pub use error::{Error, Result};

pub use num_complex::Complex64;
