//! Centralized numerical tolerances.
//!
//! Every threshold used for input validation, truncation, or clamping is a
//! field of [`Tolerances`], so the whole crate has a single knob. The
//! process-wide record defaults to [`Tolerances::default`] and can be
//! replaced once, before first use, with [`install`] (the CLI does this
//! when the `QPC_TOL_OVERRIDE` environment variable points to a JSON
//! file).

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by all modules.
///
/// Deserialization falls back to the default for any missing field, so an
/// override file only needs to name the knobs it changes.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Max entrywise |M - M†| accepted as Hermitian.
    pub hermiticity: f64,
    /// Max entrywise |τ - τᵀ| accepted as complex symmetric.
    pub symmetry: f64,
    /// Max entrywise |V†V - 1| accepted as left-unitary.
    pub left_unitary: f64,
    /// Max |Tr ϱ - 1| accepted for a density matrix.
    pub trace_one: f64,
    /// Most negative eigenvalue accepted for a density matrix.
    pub psd_floor: f64,
    /// Max | ‖ψ‖ - 1 | accepted for a normalized pure state.
    pub state_norm: f64,
    /// Eigenvalues below this are dropped from spectral ensembles.
    pub spectral_cutoff: f64,
    /// Eigenvalues below this are skipped in the entropy sum.
    pub entropy_cutoff: f64,
    /// 𝒜₁₁¹¹ below this signals a separable dominant eigenvector.
    pub separable_dominant: f64,
    /// Radicands in [-radicand_clamp, 0) are treated as 0.
    pub radicand_clamp: f64,
    /// Eigenvalue gap below which the dominant eigenvalue is flagged
    /// degenerate, and below which eigen-sorting applies the
    /// deterministic lexicographic tie-break.
    pub degeneracy_gap: f64,
    /// Tensor eigenvalues below this are dropped when extracting the
    /// symmetric-matrix decomposition.
    pub tensor_rank_cutoff: f64,
    /// Max entrywise residual accepted when checking that τ is a unit
    /// combination of the decomposition matrices.
    pub membership_residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-10,
            symmetry: 1e-10,
            left_unitary: 1e-10,
            trace_one: 1e-10,
            psd_floor: -1e-9,
            state_norm: 1e-10,
            spectral_cutoff: 1e-12,
            entropy_cutoff: 1e-14,
            separable_dominant: 1e-12,
            radicand_clamp: 1e-12,
            degeneracy_gap: 1e-10,
            tensor_rank_cutoff: 1e-12,
            membership_residual: 1e-8,
        }
    }
}

static TOLERANCES: OnceLock<Tolerances> = OnceLock::new();

/// The process-wide tolerance record.
pub fn current() -> &'static Tolerances {
    TOLERANCES.get_or_init(Tolerances::default)
}

/// Install a non-default tolerance record.
///
/// Must run before anything reads [`current`]; returns `Err` with the
/// already-installed record otherwise.
pub fn install(t: Tolerances) -> Result<(), Tolerances> {
    TOLERANCES.set(t).map_err(|_| *current())
}
