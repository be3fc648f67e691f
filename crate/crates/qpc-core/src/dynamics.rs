//! Decoherence dynamics of a bipartite system coupled to a bath.
//!
//! The model: a d1×d2 system with Hamiltonian Hₛ, weakly coupled to a
//! finite bath through a joint Hamiltonian Hₛᵦ, both drawn from the
//! Gaussian unitary ensemble,
//!
//! ```text
//! H = αₛ·Hₛ⊗𝟙ᵦ + αₛᵦ·Hₛᵦ,    U(t) = exp(iHt).
//! ```
//!
//! The total state starts as a pure system state tensored with the
//! maximally mixed bath state; tracing out the bath after the exact
//! unitary evolution yields a mixed system state whose concurrence
//! estimate and entropy are recorded per time point. H is diagonalized
//! once per trajectory and rephased per point.
//!
//! The bath dimension and the distribution of the random Hamiltonians
//! are model choices (GUE, d_bath = 8 by default), not canonical values;
//! both are configurable.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::concurrence::{qp_concurrence, QpaResult};
use crate::error::{Error, Result};
use crate::linops::{
    ensure_hermitian, hermitian_eigendecomposition, kron, propagator_from_eigensystem, CMatrix,
    CVector, Eigendecomposition, C64,
};
use crate::states::{partial_trace_over_2, von_neumann_entropy, DensityMatrix, PureState};

/// Full parametrization of a decoherence run.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    /// System subsystem dimensions.
    pub d1: usize,
    pub d2: usize,
    /// Bath dimension.
    pub d_bath: usize,
    /// Strength of the system Hamiltonian.
    pub alpha_s: f64,
    /// Strength of the system-bath coupling.
    pub alpha_sb: f64,
    /// Time grid: `t_steps` points from `t_start` to `t_end` inclusive
    /// (a single point sits at `t_start`).
    pub t_start: f64,
    pub t_end: f64,
    pub t_steps: usize,
    /// Seed for the Hamiltonians and the initial state.
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            d1: 3,
            d2: 5,
            d_bath: 8,
            alpha_s: 0.2,
            alpha_sb: 0.02,
            t_start: 0.0,
            t_end: 30.0,
            t_steps: 200,
            seed: 7,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.d1 < 1 || self.d2 < 1 || self.d_bath < 1 {
            return Err(Error::InvalidConfig(format!(
                "dimensions must be at least 1, got {}x{} with bath {}",
                self.d1, self.d2, self.d_bath
            )));
        }
        if self.t_steps < 1 {
            return Err(Error::InvalidConfig("t_steps must be at least 1".into()));
        }
        if !self.alpha_s.is_finite() || !self.alpha_sb.is_finite() {
            return Err(Error::InvalidConfig(
                "coupling strengths must be finite".into(),
            ));
        }
        if !self.t_start.is_finite() || !self.t_end.is_finite() || self.t_end < self.t_start {
            return Err(Error::InvalidConfig(format!(
                "invalid time window [{}, {}]",
                self.t_start, self.t_end
            )));
        }
        Ok(())
    }

    /// System dimension d1·d2.
    pub fn d_sys(&self) -> usize {
        self.d1 * self.d2
    }

    /// The inclusive time grid.
    pub fn time_grid(&self) -> Vec<f64> {
        if self.t_steps == 1 {
            return vec![self.t_start];
        }
        let span = self.t_end - self.t_start;
        (0..self.t_steps)
            .map(|i| self.t_start + span * i as f64 / (self.t_steps - 1) as f64)
            .collect()
    }
}

/// One time point of a trajectory.
#[derive(Debug, Clone)]
pub struct TrajectoryPoint {
    pub t: f64,
    /// Quasi-pure concurrence estimate of the reduced system state.
    pub c_qp: f64,
    /// Von Neumann entropy of the reduced system state, in nats.
    pub entropy: f64,
    /// Purity Tr ϱ² of the reduced system state.
    pub purity: f64,
    /// Dominant eigenvalue μ₁ of the reduced system state.
    pub dominant_weight: f64,
    pub separable_dominant: bool,
    pub dominant_degenerate: bool,
}

/// Gaussian-unitary-ensemble draw: real N(0,1) diagonal, off-diagonal
/// entries with independent N(0, 1/2) real and imaginary parts,
/// hermitian by construction.
///
/// The sampling order (diagonal entry, then the upper off-diagonal
/// row-by-row) is fixed, so a fixed generator state reproduces the
/// matrix bit for bit.
pub fn random_hermitian<R: Rng>(d: usize, rng: &mut R) -> CMatrix {
    assert!(d >= 1, "dimension must be at least 1");
    let off_scale = 0.5f64.sqrt();
    let mut m = CMatrix::zeros(d, d);
    for i in 0..d {
        let diag: f64 = StandardNormal.sample(rng);
        m[(i, i)] = C64::new(diag, 0.0);
        for j in (i + 1)..d {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            let z = C64::new(re * off_scale, im * off_scale);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// H = αₛ·Hₛ⊗𝟙ᵦ + αₛᵦ·Hₛᵦ on the d_sys·d_bath total space.
pub fn total_hamiltonian(
    hs: &CMatrix,
    hsb: &CMatrix,
    alpha_s: f64,
    alpha_sb: f64,
    d_sys: usize,
    d_bath: usize,
) -> Result<CMatrix> {
    let d_total = d_sys * d_bath;
    if hs.nrows() != d_sys || hs.ncols() != d_sys {
        return Err(Error::dimension(
            "total_hamiltonian (system part)",
            format!("{d_sys}x{d_sys}"),
            format!("{}x{}", hs.nrows(), hs.ncols()),
        ));
    }
    if hsb.nrows() != d_total || hsb.ncols() != d_total {
        return Err(Error::dimension(
            "total_hamiltonian (coupling part)",
            format!("{d_total}x{d_total}"),
            format!("{}x{}", hsb.nrows(), hsb.ncols()),
        ));
    }
    ensure_hermitian(hs, "total_hamiltonian (system part)")?;
    ensure_hermitian(hsb, "total_hamiltonian (coupling part)")?;
    let bath_identity = CMatrix::identity(d_bath, d_bath);
    Ok(kron(hs, &bath_identity) * C64::new(alpha_s, 0.0) + hsb * C64::new(alpha_sb, 0.0))
}

/// |ψₛ⟩⟨ψₛ| ⊗ 𝟙/d_bath, as a density matrix on the system|bath split.
pub fn initial_total_state(psi: &PureState, d_bath: usize) -> Result<DensityMatrix> {
    let bath = CMatrix::identity(d_bath, d_bath) * C64::new(1.0 / d_bath as f64, 0.0);
    let total = kron(&psi.outer_product(), &bath);
    DensityMatrix::new(psi.d1() * psi.d2(), d_bath, total)
}

/// U(t)·ϱ₀·U(t)† with U(t) rephased from a precomputed eigensystem of H.
pub fn evolve_total(rho_total_0: &CMatrix, h_eig: &Eigendecomposition, t: f64) -> CMatrix {
    let u = propagator_from_eigensystem(h_eig, t);
    &u * rho_total_0 * u.adjoint()
}

/// Reduced system state Tr_bath(U ϱ₀ U†) at time t, validated against
/// the density-matrix invariants.
///
/// Diagonalizes H on each call; trajectory runs share one
/// eigendecomposition through [`run_trajectory`] instead.
pub fn evolve_reduced(
    rho_total_0: &DensityMatrix,
    h: &CMatrix,
    t: f64,
    d1: usize,
    d2: usize,
) -> Result<DensityMatrix> {
    if d1 * d2 != rho_total_0.d1() {
        return Err(Error::dimension(
            "evolve_reduced",
            format!("system dimension {}", rho_total_0.d1()),
            format!("{d1}x{d2}"),
        ));
    }
    let eig = hermitian_eigendecomposition(h)?;
    let total = evolve_total(rho_total_0.matrix(), &eig, t);
    let reduced = partial_trace_over_2(&total, rho_total_0.d1(), rho_total_0.d2())?;
    DensityMatrix::new(d1, d2, reduced)
}

/// A trajectory together with the model it was generated from.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    /// The initial pure system state drawn from the seed.
    pub initial_state: PureState,
}

/// Run the full decoherence experiment for a configuration.
///
/// Draws Hₛ, Hₛᵦ, and the initial state from the seed (in that order)
/// and diagonalizes H once. The initial state factorizes as
/// (1/d_bath)·Σ_β |ψ₀⊗β⟩⟨ψ₀⊗β|, so each grid time only rephases the
/// d_bath product columns in the eigenbasis and accumulates their
/// rank-1 bath traces; no propagator or total density matrix is ever
/// formed.
pub fn run_trajectory(config: &SimConfig) -> Result<Trajectory> {
    config.validate()?;
    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
    let d_sys = config.d_sys();
    let d_bath = config.d_bath;
    let hs = random_hermitian(d_sys, &mut rng);
    let hsb = random_hermitian(d_sys * d_bath, &mut rng);
    let psi0 = PureState::random(config.d1, config.d2, &mut rng);

    let h = total_hamiltonian(&hs, &hsb, config.alpha_s, config.alpha_sb, d_sys, d_bath)?;
    let h_eig = hermitian_eigendecomposition(&h)?;

    // Initial columns |ψ₀⊗β⟩ expressed in the eigenbasis of H.
    let basis_adjoint = h_eig.vectors.adjoint();
    let columns: Vec<CVector> = (0..d_bath)
        .map(|beta| {
            let mut column = CVector::zeros(d_sys * d_bath);
            for (s, amplitude) in psi0.amplitudes().iter().enumerate() {
                column[s * d_bath + beta] = *amplitude;
            }
            &basis_adjoint * column
        })
        .collect();
    let bath_weight = C64::new(1.0 / d_bath as f64, 0.0);

    let mut points = Vec::with_capacity(config.t_steps);
    for t in config.time_grid() {
        let mut reduced_matrix = CMatrix::zeros(d_sys, d_sys);
        for coefficients in &columns {
            let mut rephased = coefficients.clone();
            for (i, &energy) in h_eig.values.iter().enumerate() {
                rephased[i] *= C64::new(0.0, energy * t).exp();
            }
            let evolved = &h_eig.vectors * rephased;
            for s in 0..d_sys {
                for s2 in 0..d_sys {
                    let mut acc = C64::new(0.0, 0.0);
                    for beta in 0..d_bath {
                        acc += evolved[s * d_bath + beta] * evolved[s2 * d_bath + beta].conj();
                    }
                    reduced_matrix[(s, s2)] += acc * bath_weight;
                }
            }
        }
        let reduced = DensityMatrix::new(config.d1, config.d2, reduced_matrix)?;
        let QpaResult {
            value,
            dominant_weight,
            separable_dominant,
            dominant_degenerate,
            ..
        } = qp_concurrence(&reduced);
        points.push(TrajectoryPoint {
            t,
            c_qp: value,
            entropy: von_neumann_entropy(&reduced),
            purity: reduced.purity(),
            dominant_weight,
            separable_dominant,
            dominant_degenerate,
        });
    }
    Ok(Trajectory {
        points,
        initial_state: psi0,
    })
}
