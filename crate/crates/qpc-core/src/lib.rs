//! Entanglement estimation for bipartite mixed states via the quasi-pure
//! approximation of concurrence.
//!
//! The crate is organized in four layers:
//!
//! - [`linops`]: dense complex linear-algebra kernels (Hermitian
//!   eigendecomposition, singular values of complex symmetric matrices,
//!   unitary matrix exponentials, Kronecker products).
//! - [`states`]: bipartite state types, partial traces, entropy, the
//!   Horodecki bound-entangled family, and the exact two-qubit
//!   spin-flip concurrence used as an oracle.
//! - [`concurrence`]: pure-state concurrence, the rank-4 concurrence
//!   tensor, the quasi-pure closed form, and a brute-force convex-roof
//!   minimizer over ensemble decompositions.
//! - [`dynamics`]: exact system-bath evolution of a random Hamiltonian
//!   model, producing time series of concurrence and entropy.
//!
//! All numerical thresholds live in [`tol::Tolerances`]; see that module
//! for the override mechanism.

pub mod concurrence;
pub mod dynamics;
pub mod error;
pub mod linops;
pub mod states;
pub mod tol;

pub use error::{Error, Result};
pub use linops::{kron, CMatrix, CVector, C64};
pub use states::{DensityMatrix, PureState};
