//! Phaseless Clifford dynamics for shuffle-coupled Floquet circuits on
//! N x N (or doubled 2 x N x N) qubit matrices.
//!
//! The crate tracks Heisenberg evolution of Pauli strings over GF(2): one
//! Floquet step is a global row/column shuffle of the qubit matrix followed
//! by a fixed four-qubit Clifford gate on every cell of a partition of the
//! matrix entries. On top of that core sit diagnostics for operator
//! spreading (infection bounds, operator size, scrambling times and the
//! Lyapunov exponent), stabilizer-rank entanglement entropy, and
//! Hayden-Preskill style erasure-recovery checks.
//!
//! Heavy loops (matrix products, elimination, sweeps over initial operators
//! or scan cells) parallelize with rayon when the default `parallel` feature
//! is enabled; disabling it yields a bit-for-bit identical sequential build.

pub mod clifford;
pub mod connectivity;
pub mod diagnostics;
pub mod error;
pub mod floquet;
pub mod gf2;
pub mod hp;
pub mod lattice;
pub mod oracle;
mod par;
pub mod pauli;

pub use clifford::{CliffordMap, Gate, GateSpec};
pub use connectivity::{Partition, Rule};
pub use diagnostics::{LyapunovFit, RegionA};
pub use error::{Error, Result};
pub use floquet::FloquetCircuit;
pub use gf2::{BitMatrix, BitVec};
pub use hp::{CodeMatrices, ErasurePattern, ScanEntry};
pub use lattice::{Layer, Layout};
pub use pauli::{Pauli, PauliVec};
