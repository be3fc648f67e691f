//! Concurrence of bipartite states and its quasi-pure approximation.
//!
//! For a pure state the concurrence follows from purities of the reduced
//! states. For mixed states it is the convex-roof infimum over all
//! pure-state decompositions, which this module attacks from two sides:
//!
//! - [`qp_concurrence`] evaluates the closed-form quasi-pure estimate: the
//!   spectral ensemble of ϱ defines a rank-4 tensor 𝒜 whose dominant-row
//!   block yields a complex symmetric matrix τ, and
//!   `max(λ₁ − Σ_{i>1} λᵢ, 0)` over the singular values of τ is a lower
//!   bound of the concurrence. The only heavy step is diagonalizing a
//!   matrix of the size of ϱ itself.
//! - [`brute_force_convex_roof`] minimizes the ensemble average directly
//!   over left-unitary reparametrizations with random restarts, giving an
//!   upper estimate that the bound can be tested against.
//!
//! [`decompose_tensor`] and [`verify_tau_membership`] expose the algebra
//! that certifies the lower-bound property: 𝒜 factors through complex
//! symmetric matrices Tᵅ, and τ is the specific unit-norm combination
//! Σ_α z_α Tᵅ with z_α ∝ (Tᵅ₁₁)*.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linops::{
    hermitian_eigendecomposition, max_abs, symmetric_singular_values, trace_product, CMatrix,
    CVector, C64,
};
use crate::states::{partial_trace_over_1, partial_trace_over_2, DensityMatrix};
use crate::tol;

/// Which reduced density matrix to use in the two-term pure-state form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReducedSide {
    Subsystem1,
    Subsystem2,
}

fn ensure_vector_dims(psi: &CVector, d1: usize, d2: usize, context: &'static str) -> Result<()> {
    if d1 == 0 || d2 == 0 || psi.len() != d1 * d2 {
        return Err(Error::dimension(context, d1 * d2, psi.len()));
    }
    for (i, z) in psi.iter().enumerate() {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NonFiniteEntry { row: i, col: 0 });
        }
    }
    Ok(())
}

fn clamped_sqrt(value: f64) -> f64 {
    debug_assert!(
        value > -1e-9,
        "radicand {value} far below the clamping window"
    );
    if value <= 0.0 {
        0.0
    } else {
        value.sqrt()
    }
}

/// Pure-state concurrence in the four-term form
/// `c² = Tr(P²) − Tr₁ϱ₁² − Tr₂ϱ₂² + (Tr P)²` with `P = |Ψ⟩⟨Ψ|`.
///
/// Valid for subnormalized inputs, which is what the convex-roof
/// machinery feeds it.
pub fn pure_concurrence(psi: &CVector, d1: usize, d2: usize) -> Result<f64> {
    ensure_vector_dims(psi, d1, d2, "pure_concurrence")?;
    let p = psi * psi.adjoint();
    let r1 = partial_trace_over_2(&p, d1, d2)?;
    let r2 = partial_trace_over_1(&p, d1, d2)?;
    let tr_p = p.trace();
    let c_sq =
        trace_product(&p, &p) - trace_product(&r1, &r1) - trace_product(&r2, &r2) + tr_p * tr_p;
    Ok(clamped_sqrt(c_sq.re))
}

/// Pure-state concurrence in the reduced-purity form
/// `c² = 2(⟨Ψ|Ψ⟩² − Tr ϱ_r²)`, with either reduced matrix.
///
/// Agrees with [`pure_concurrence`] to machine precision; kept as a
/// second algebraic route for cross-checking.
pub fn pure_concurrence_reduced(
    psi: &CVector,
    d1: usize,
    d2: usize,
    side: ReducedSide,
) -> Result<f64> {
    ensure_vector_dims(psi, d1, d2, "pure_concurrence_reduced")?;
    let p = psi * psi.adjoint();
    let reduced = match side {
        ReducedSide::Subsystem1 => partial_trace_over_2(&p, d1, d2)?,
        ReducedSide::Subsystem2 => partial_trace_over_1(&p, d1, d2)?,
    };
    let norm_sq = psi.norm_squared();
    let c_sq = 2.0 * (norm_sq * norm_sq - trace_product(&reduced, &reduced).re);
    Ok(clamped_sqrt(c_sq))
}

/// Spectral decomposition of a density matrix: eigenvalues μⱼ above the
/// truncation cutoff (descending) with their eigenvectors |Φⱼ⟩.
///
/// The dropped weight is reported, never renormalized away.
#[derive(Debug, Clone)]
pub struct SpectralEnsemble {
    d1: usize,
    d2: usize,
    mu: Vec<f64>,
    phi: Vec<CVector>,
    truncated_weight: f64,
}

impl SpectralEnsemble {
    pub fn n(&self) -> usize {
        self.mu.len()
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn phi(&self) -> &[CVector] {
        &self.phi
    }

    pub fn truncated_weight(&self) -> f64 {
        self.truncated_weight
    }

    /// μ₁ − μ₂ within the configured gap.
    pub fn dominant_degenerate(&self) -> bool {
        self.mu.len() >= 2 && self.mu[0] - self.mu[1] <= tol::current().degeneracy_gap
    }
}

/// Eigensystem of ϱ truncated at the configured spectral cutoff.
pub fn spectral_ensemble(rho: &DensityMatrix) -> SpectralEnsemble {
    spectral_ensemble_with_cutoff(rho, tol::current().spectral_cutoff)
}

/// Eigensystem of ϱ truncated at an explicit cutoff.
pub fn spectral_ensemble_with_cutoff(rho: &DensityMatrix, cutoff: f64) -> SpectralEnsemble {
    let eig = hermitian_eigendecomposition(rho.matrix())
        .expect("DensityMatrix invariant guarantees hermiticity");
    let mut mu = Vec::new();
    let mut phi = Vec::new();
    for (k, &value) in eig.values.iter().enumerate() {
        if value > cutoff {
            mu.push(value);
            phi.push(eig.vectors.column(k).into_owned());
        }
    }
    let kept: f64 = mu.iter().sum();
    SpectralEnsemble {
        d1: rho.d1(),
        d2: rho.d2(),
        mu,
        phi,
        truncated_weight: (1.0 - kept).max(0.0),
    }
}

/// The rank-4 concurrence tensor 𝒜ⱼₖˡᵐ of a spectral ensemble, stored as
/// its flattened n²×n² matrix with row index (j,k) and column index
/// (l,m).
///
/// The flattening is hermitian positive semidefinite, and the tensor
/// carries the symmetries 𝒜ⱼₖˡᵐ = 𝒜ₖⱼᵐˡ = 𝒜ₖⱼˡᵐ inherited from the
/// symmetric definition of pure-state concurrence.
#[derive(Debug, Clone)]
pub struct ConcurrenceTensor {
    n: usize,
    d1: usize,
    d2: usize,
    flat: CMatrix,
}

impl ConcurrenceTensor {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    /// 𝒜ⱼₖˡᵐ with zero-based indices.
    pub fn entry(&self, j: usize, k: usize, l: usize, m: usize) -> C64 {
        self.flat[(j * self.n + k, l * self.n + m)]
    }

    /// The n²×n² flattened matrix.
    pub fn flat(&self) -> &CMatrix {
        &self.flat
    }
}

/// Populate all n⁴ tensor entries from the four trace terms
///
/// ```text
/// 𝒜ⱼₖˡᵐ = √(μⱼμₖμₗμₘ) [ Tr(|Φⱼ⟩⟨Φₗ|Φₖ⟩⟨Φₘ|)
///                      − Tr₁(Tr₂(|Φⱼ⟩⟨Φₗ|) Tr₂(|Φₖ⟩⟨Φₘ|))
///                      − Tr₂(Tr₁(|Φⱼ⟩⟨Φₗ|) Tr₁(|Φₖ⟩⟨Φₘ|))
///                      + Tr(|Φⱼ⟩⟨Φₗ|) Tr(|Φₖ⟩⟨Φₘ|) ]
/// ```
///
/// The pairwise reduced operators are precomputed once, so the cost is
/// O(n²·D·d) for the reductions plus O(n⁴·(d1²+d2²)) for the contraction.
pub fn build_concurrence_tensor(ensemble: &SpectralEnsemble) -> ConcurrenceTensor {
    let n = ensemble.n();
    let d1 = ensemble.d1();
    let d2 = ensemble.d2();
    let mu = ensemble.mu();
    let phi = ensemble.phi();

    // reduced2[j*n + l] = Tr₂ |Φⱼ⟩⟨Φₗ|, reduced1 likewise over subsystem 1,
    // overlaps[(j, l)] = Tr |Φⱼ⟩⟨Φₗ| = ⟨Φₗ|Φⱼ⟩.
    let mut reduced2 = Vec::with_capacity(n * n);
    let mut reduced1 = Vec::with_capacity(n * n);
    let mut overlaps = CMatrix::zeros(n.max(1), n.max(1));
    for j in 0..n {
        for l in 0..n {
            let mut r2 = CMatrix::zeros(d1, d1);
            for a in 0..d1 {
                for b in 0..d1 {
                    let mut acc = C64::new(0.0, 0.0);
                    for c in 0..d2 {
                        acc += phi[j][a * d2 + c] * phi[l][b * d2 + c].conj();
                    }
                    r2[(a, b)] = acc;
                }
            }
            let mut r1 = CMatrix::zeros(d2, d2);
            for c in 0..d2 {
                for e in 0..d2 {
                    let mut acc = C64::new(0.0, 0.0);
                    for a in 0..d1 {
                        acc += phi[j][a * d2 + c] * phi[l][a * d2 + e].conj();
                    }
                    r1[(c, e)] = acc;
                }
            }
            overlaps[(j, l)] = r2.trace();
            reduced2.push(r2);
            reduced1.push(r1);
        }
    }

    let root_mu: Vec<f64> = mu.iter().map(|&m| m.max(0.0).sqrt()).collect();
    let nn = n * n;
    let mut flat = CMatrix::zeros(nn, nn);
    for j in 0..n {
        for k in 0..n {
            for l in 0..n {
                for m in 0..n {
                    let weight = root_mu[j] * root_mu[k] * root_mu[l] * root_mu[m];
                    let full = overlaps[(k, l)] * overlaps[(j, m)];
                    let red2 = trace_product(&reduced2[j * n + l], &reduced2[k * n + m]);
                    let red1 = trace_product(&reduced1[j * n + l], &reduced1[k * n + m]);
                    let traces = overlaps[(j, l)] * overlaps[(k, m)];
                    flat[(j * n + k, l * n + m)] =
                        C64::new(weight, 0.0) * (full - red2 - red1 + traces);
                }
            }
        }
    }
    ConcurrenceTensor { n, d1, d2, flat }
}

/// The complex symmetric matrix of the quasi-pure approximation,
/// τⱼₖ = 𝒜ⱼₖ¹¹ / √𝒜₁₁¹¹.
#[derive(Debug, Clone)]
pub struct TauMatrix {
    matrix: CMatrix,
}

impl TauMatrix {
    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

/// Result of [`build_tau`]: either the τ matrix, or the signal that the
/// dominant eigenvector is separable (𝒜₁₁¹¹ ≈ 0). The quasi-pure
/// estimate is then 0; a state dominated by a separable eigenvector is
/// typically separable anyway.
#[derive(Debug, Clone)]
pub enum TauOutcome {
    Tau(TauMatrix),
    SeparableDominant,
}

/// Build τ from the tensor's dominant-row block.
pub fn build_tau(tensor: &ConcurrenceTensor) -> TauOutcome {
    let a1111 = tensor.entry(0, 0, 0, 0).re;
    if a1111 < tol::current().separable_dominant {
        return TauOutcome::SeparableDominant;
    }
    let n = tensor.n();
    let scale = 1.0 / a1111.sqrt();
    let raw = CMatrix::from_fn(n, n, |j, k| tensor.entry(j, k, 0, 0) * scale);
    // Symmetric up to rounding by the tensor symmetry; make it exact.
    let matrix = (&raw + raw.transpose()) * C64::new(0.5, 0.0);
    TauOutcome::Tau(TauMatrix { matrix })
}

/// Build τ straight from the ensemble.
///
/// τ only involves the 𝒜ⱼₖ¹¹ slice, so only the n operator pairs against
/// the dominant eigenvector are reduced and the cost stays at O(n²·D)
/// instead of the n⁴ of the full tensor. Same arithmetic per entry as
/// [`build_concurrence_tensor`] followed by [`build_tau`].
pub fn build_tau_from_ensemble(ensemble: &SpectralEnsemble) -> TauOutcome {
    let n = ensemble.n();
    if n == 0 {
        return TauOutcome::SeparableDominant;
    }
    let d1 = ensemble.d1();
    let d2 = ensemble.d2();
    let phi = ensemble.phi();
    let root_mu: Vec<f64> = ensemble.mu().iter().map(|&m| m.max(0.0).sqrt()).collect();

    // Reductions of |Φⱼ⟩⟨Φ₁| only.
    let mut reduced2 = Vec::with_capacity(n);
    let mut reduced1 = Vec::with_capacity(n);
    let mut overlap = vec![C64::new(0.0, 0.0); n];
    for j in 0..n {
        let mut r2 = CMatrix::zeros(d1, d1);
        for a in 0..d1 {
            for b in 0..d1 {
                let mut acc = C64::new(0.0, 0.0);
                for c in 0..d2 {
                    acc += phi[j][a * d2 + c] * phi[0][b * d2 + c].conj();
                }
                r2[(a, b)] = acc;
            }
        }
        let mut r1 = CMatrix::zeros(d2, d2);
        for c in 0..d2 {
            for e in 0..d2 {
                let mut acc = C64::new(0.0, 0.0);
                for a in 0..d1 {
                    acc += phi[j][a * d2 + c] * phi[0][a * d2 + e].conj();
                }
                r1[(c, e)] = acc;
            }
        }
        overlap[j] = r2.trace();
        reduced2.push(r2);
        reduced1.push(r1);
    }

    let slice = CMatrix::from_fn(n, n, |j, k| {
        let weight = root_mu[j] * root_mu[k] * root_mu[0] * root_mu[0];
        let full = overlap[k] * overlap[j];
        let red2 = trace_product(&reduced2[j], &reduced2[k]);
        let red1 = trace_product(&reduced1[j], &reduced1[k]);
        let traces = overlap[j] * overlap[k];
        C64::new(weight, 0.0) * (full - red2 - red1 + traces)
    });
    let a1111 = slice[(0, 0)].re;
    if a1111 < tol::current().separable_dominant {
        return TauOutcome::SeparableDominant;
    }
    let raw = &slice * C64::new(1.0 / a1111.sqrt(), 0.0);
    let matrix = (&raw + raw.transpose()) * C64::new(0.5, 0.0);
    TauOutcome::Tau(TauMatrix { matrix })
}

/// Quasi-pure concurrence estimate together with its diagnostics.
#[derive(Debug, Clone)]
pub struct QpaResult {
    /// max(λ₁ − Σ_{i>1} λᵢ, 0); a lower bound of the concurrence.
    pub value: f64,
    /// Singular values of τ, descending. Empty in the separable-dominant
    /// case.
    pub lambdas: Vec<f64>,
    /// Largest eigenvalue μ₁ of ϱ.
    pub dominant_weight: f64,
    /// Set when the dominant eigenvector is separable and the estimate
    /// was pinned to 0.
    pub separable_dominant: bool,
    /// Set when μ₁ and μ₂ agree within the degeneracy gap; the estimate
    /// then depends on the deterministic tie-break.
    pub dominant_degenerate: bool,
    /// Spectral weight dropped by the ensemble truncation.
    pub truncated_weight: f64,
}

/// The quasi-pure concurrence estimate of a mixed state.
pub fn qp_concurrence(rho: &DensityMatrix) -> QpaResult {
    let ensemble = spectral_ensemble(rho);
    qp_concurrence_of_ensemble(&ensemble)
}

/// The quasi-pure estimate from an already-computed spectral ensemble.
pub fn qp_concurrence_of_ensemble(ensemble: &SpectralEnsemble) -> QpaResult {
    let dominant_weight = ensemble.mu().first().copied().unwrap_or(0.0);
    let dominant_degenerate = ensemble.dominant_degenerate();
    let truncated_weight = ensemble.truncated_weight();
    match build_tau_from_ensemble(ensemble) {
        TauOutcome::SeparableDominant => QpaResult {
            value: 0.0,
            lambdas: Vec::new(),
            dominant_weight,
            separable_dominant: true,
            dominant_degenerate,
            truncated_weight,
        },
        TauOutcome::Tau(tau) => {
            let lambdas =
                symmetric_singular_values(tau.matrix()).expect("τ is symmetric by construction");
            let tail: f64 = lambdas.iter().skip(1).sum();
            let value = (lambdas[0] - tail).max(0.0);
            QpaResult {
                value,
                lambdas,
                dominant_weight,
                separable_dominant: false,
                dominant_degenerate,
                truncated_weight,
            }
        }
    }
}

fn ensure_left_unitary(v: &CMatrix, n: usize, context: &'static str) -> Result<()> {
    if v.ncols() != n || v.nrows() < n {
        return Err(Error::dimension(
            context,
            format!("N x {n} with N >= {n}"),
            format!("{}x{}", v.nrows(), v.ncols()),
        ));
    }
    let gram = v.adjoint() * v;
    let violation = max_abs(&(gram - CMatrix::identity(n, n)));
    let tolerance = tol::current().left_unitary;
    if violation > tolerance {
        return Err(Error::NotLeftUnitary {
            violation,
            tolerance,
        });
    }
    Ok(())
}

/// Subnormalized ensemble members √pᵢ|Ψᵢ⟩ = Σⱼ Vᵢⱼ √μⱼ |Φⱼ⟩ for a
/// left-unitary V; every ensemble of ϱ arises this way.
pub fn ensemble_from_left_unitary(
    ensemble: &SpectralEnsemble,
    v: &CMatrix,
) -> Result<Vec<CVector>> {
    ensure_left_unitary(v, ensemble.n(), "ensemble_from_left_unitary")?;
    let dim = ensemble.d1() * ensemble.d2();
    let root_mu: Vec<f64> = ensemble.mu().iter().map(|&m| m.max(0.0).sqrt()).collect();
    let members = (0..v.nrows())
        .map(|i| {
            let mut member = CVector::zeros(dim);
            for (j, phi) in ensemble.phi().iter().enumerate() {
                member += phi * (v[(i, j)] * C64::new(root_mu[j], 0.0));
            }
            member
        })
        .collect();
    Ok(members)
}

fn roof_objective_core(flat: &CMatrix, v: &CMatrix) -> f64 {
    let n_members = v.nrows();
    let n = v.ncols();
    let mut total = 0.0;
    let mut w = CVector::zeros(n * n);
    for i in 0..n_members {
        for j in 0..n {
            for k in 0..n {
                w[j * n + k] = (v[(i, j)] * v[(i, k)]).conj();
            }
        }
        let transformed = flat * &w;
        let quad = w.dotc(&transformed).re;
        total += clamped_sqrt(quad);
    }
    total
}

/// The ensemble-averaged concurrence
/// Σᵢ √( [V⊗V 𝒜 V†⊗V†]ᵢᵢⁱⁱ ) for a left-unitary V.
///
/// For V = 𝟙 this is the eigen-ensemble average; its infimum over V is
/// the convex-roof concurrence.
pub fn convex_roof_objective(tensor: &ConcurrenceTensor, v: &CMatrix) -> Result<f64> {
    ensure_left_unitary(v, tensor.n(), "convex_roof_objective")?;
    Ok(roof_objective_core(tensor.flat(), v))
}

fn gaussian_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im)
    })
}

/// Haar-distributed left-unitary matrix (orthonormal columns).
pub fn haar_left_unitary<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    assert!(rows >= cols && cols >= 1);
    let g = gaussian_matrix(rows, cols, rng);
    let (mut q, r) = g.qr().unpack();
    // Fix column phases by the R diagonal so the distribution is Haar.
    for j in 0..cols {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = (d / d.norm()).conj();
            for i in 0..rows {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

fn orthonormalize(m: &CMatrix) -> CMatrix {
    m.clone().qr().unpack().0
}

/// Brute-force upper estimate of the convex-roof concurrence.
///
/// Random-restart local search over left-unitary V with N = n + 2
/// ensemble members: Haar-random starts refined by shrinking random
/// perturbations, accepting only strict improvements. Each restart runs
/// on its own generator seeded from `seed` and the restart index, so the
/// result is reproducible and monotonically non-increasing in both
/// budget parameters.
///
/// Intended for small ranks; the cost per candidate grows as n⁴.
pub fn brute_force_convex_roof(
    rho: &DensityMatrix,
    restarts: usize,
    iterations: usize,
    seed: u64,
) -> f64 {
    let ensemble = spectral_ensemble(rho);
    let tensor = build_concurrence_tensor(&ensemble);
    let n = ensemble.n();
    let n_members = n + 2;
    let flat = tensor.flat();

    let mut best = f64::INFINITY;
    for restart in 0..restarts.max(1) {
        let mut rng =
            ChaCha12Rng::seed_from_u64(seed ^ (restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut v = haar_left_unitary(n_members, n, &mut rng);
        let mut current = roof_objective_core(flat, &v);
        let step_start: f64 = 0.5;
        let step_end: f64 = 1e-3;
        let span = iterations.saturating_sub(1).max(1) as f64;
        for iteration in 0..iterations {
            let step = step_start * (step_end / step_start).powf(iteration as f64 / span);
            let perturbed = orthonormalize(
                &(&v + gaussian_matrix(n_members, n, &mut rng) * C64::new(step, 0.0)),
            );
            let candidate = roof_objective_core(flat, &perturbed);
            if candidate < current {
                current = candidate;
                v = perturbed;
            }
        }
        best = best.min(current);
    }
    best
}

/// Outcome of [`decompose_tensor`]: the complex symmetric factors Tᵅ with
/// 𝒜ⱼₖˡᵐ = Σ_α Tᵅⱼₖ (Tᵅₗₘ)*, plus the largest asymmetry observed before
/// the factors were symmetrized.
#[derive(Debug, Clone)]
pub struct TensorDecomposition {
    pub matrices: Vec<CMatrix>,
    pub max_asymmetry: f64,
}

/// Factor the flattened tensor through its eigensystem. Every
/// eigenvector with eigenvalue above the rank cutoff, scaled by the
/// eigenvalue's square root and reshaped to n×n, inherits complex
/// symmetry from the tensor; the reshaped matrices are symmetrized
/// exactly and returned.
pub fn decompose_tensor(tensor: &ConcurrenceTensor) -> TensorDecomposition {
    let n = tensor.n();
    let eig = hermitian_eigendecomposition(tensor.flat())
        .expect("flattened concurrence tensor is hermitian by construction");
    let cutoff = tol::current().tensor_rank_cutoff;
    let mut matrices = Vec::new();
    let mut max_asymmetry = 0.0f64;
    for (k, &eta) in eig.values.iter().enumerate() {
        if eta <= cutoff {
            continue;
        }
        let scale = C64::new(eta.sqrt(), 0.0);
        let column = eig.vectors.column(k);
        let raw = CMatrix::from_fn(n, n, |j, l| column[j * n + l] * scale);
        max_asymmetry = max_asymmetry.max(crate::linops::symmetry_violation(&raw));
        matrices.push((&raw + raw.transpose()) * C64::new(0.5, 0.0));
    }
    TensorDecomposition {
        matrices,
        max_asymmetry,
    }
}

/// Outcome of [`verify_tau_membership`].
#[derive(Debug, Clone)]
pub enum TauMembership {
    /// τ compared against Σ_α z_α Tᵅ with z_α = (Tᵅ₁₁)* / √(Σ_β |Tᵝ₁₁|²).
    Checked {
        holds: bool,
        /// Max entrywise |Σ_α z_α Tᵅ − τ|.
        residual: f64,
        /// Σ_α |z_α|²; equals 1 for a valid membership certificate.
        weight_norm: f64,
    },
    /// All Tᵅ₁₁ vanish: the dominant eigenvector is separable and no
    /// certificate exists (matches the separable-dominant signal of
    /// [`build_tau`]).
    SeparableDominant,
}

/// Check that τ is the unit-norm combination of decomposition factors
/// that certifies it as a concurrence lower bound.
pub fn verify_tau_membership(tensor: &ConcurrenceTensor, tau: &TauMatrix) -> TauMembership {
    let decomposition = decompose_tensor(tensor);
    let n = tensor.n();
    let weight_sq: f64 = decomposition
        .matrices
        .iter()
        .map(|t| t[(0, 0)].norm_sqr())
        .sum();
    if weight_sq < tol::current().separable_dominant {
        return TauMembership::SeparableDominant;
    }
    let scale = 1.0 / weight_sq.sqrt();
    let mut combination = CMatrix::zeros(n, n);
    let mut weight_norm = 0.0;
    for t in &decomposition.matrices {
        let z = t[(0, 0)].conj() * scale;
        weight_norm += z.norm_sqr();
        combination += t * z;
    }
    let residual = max_abs(&(combination - tau.matrix()));
    TauMembership::Checked {
        holds: residual <= tol::current().membership_residual,
        residual,
        weight_norm,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{
        horodecki_state, random_mixed_state, random_pure_state, werner_state, DensityMatrix,
        PureState,
    };
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn bell_vector() -> CVector {
        PureState::bell().amplitudes().clone()
    }

    fn basis_product_state() -> CVector {
        let mut v = CVector::zeros(4);
        v[0] = C64::new(1.0, 0.0);
        v
    }

    #[test]
    fn pure_concurrence_reference_points() {
        assert_abs_diff_eq!(
            pure_concurrence(&bell_vector(), 2, 2).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            pure_concurrence(&basis_product_state(), 2, 2).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        // √0.9 |00⟩ + √0.1 |11⟩: c = √(2·(1 − 0.82)) = 0.6.
        let mut v = CVector::zeros(4);
        v[0] = C64::new(0.9f64.sqrt(), 0.0);
        v[3] = C64::new(0.1f64.sqrt(), 0.0);
        assert_abs_diff_eq!(pure_concurrence(&v, 2, 2).unwrap(), 0.6, epsilon = 1e-12);
    }

    #[test]
    fn reduced_form_matches_four_term_form() {
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        for _ in 0..50 {
            let psi = random_pure_state(15, &mut rng);
            let four_term = pure_concurrence(&psi, 3, 5).unwrap();
            for side in [ReducedSide::Subsystem1, ReducedSide::Subsystem2] {
                let reduced = pure_concurrence_reduced(&psi, 3, 5, side).unwrap();
                assert!((four_term - reduced).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn pure_concurrence_rejects_wrong_length() {
        let v = CVector::zeros(5);
        assert!(pure_concurrence(&v, 2, 2).is_err());
    }

    #[test]
    fn spectral_ensemble_pure_state() {
        let rho = DensityMatrix::from_pure(&PureState::bell());
        let e = spectral_ensemble(&rho);
        assert_eq!(e.n(), 1);
        assert_abs_diff_eq!(e.mu()[0], 1.0, epsilon = 1e-12);
        assert!(e.truncated_weight() < 1e-12);
    }

    #[test]
    fn spectral_ensemble_maximally_mixed() {
        let rho = DensityMatrix::new(2, 2, CMatrix::identity(4, 4) * C64::new(0.25, 0.0)).unwrap();
        let e = spectral_ensemble(&rho);
        assert_eq!(e.n(), 4);
        for &m in e.mu() {
            assert_abs_diff_eq!(m, 0.25, epsilon = 1e-12);
        }
        assert!(e.dominant_degenerate());
    }

    #[test]
    fn spectral_ensemble_horodecki_a1() {
        let e = spectral_ensemble(&horodecki_state(1.0).unwrap());
        assert_eq!(e.n(), 7);
        assert_abs_diff_eq!(e.mu()[0], 1.0 / 3.0, epsilon = 1e-12);
        for &m in &e.mu()[1..] {
            assert_abs_diff_eq!(m, 1.0 / 9.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn tensor_rank_one_pure_states() {
        let bell = DensityMatrix::from_pure(&PureState::bell());
        let tensor = build_concurrence_tensor(&spectral_ensemble(&bell));
        assert_eq!(tensor.n(), 1);
        assert_abs_diff_eq!(tensor.entry(0, 0, 0, 0).re, 1.0, epsilon = 1e-12);

        let product = PureState::new(2, 2, basis_product_state()).unwrap();
        let tensor =
            build_concurrence_tensor(&spectral_ensemble(&DensityMatrix::from_pure(&product)));
        assert_abs_diff_eq!(tensor.entry(0, 0, 0, 0).re, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn tensor_flat_is_psd_on_horodecki() {
        let tensor = build_concurrence_tensor(&spectral_ensemble(&horodecki_state(0.5).unwrap()));
        let eig = hermitian_eigendecomposition(tensor.flat()).unwrap();
        assert!(*eig.values.last().unwrap() >= -1e-9);
    }

    #[test]
    fn tensor_symmetries_on_random_state() {
        let mut rng = ChaCha12Rng::seed_from_u64(8);
        let rho = random_mixed_state(2, 3, 4, &mut rng);
        let tensor = build_concurrence_tensor(&spectral_ensemble(&rho));
        let n = tensor.n();
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    for m in 0..n {
                        let base = tensor.entry(j, k, l, m);
                        assert!((base - tensor.entry(k, j, m, l)).norm() < 1e-10);
                        assert!((base - tensor.entry(k, j, l, m)).norm() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn tau_of_rank_one_state_is_scalar_concurrence() {
        let bell = DensityMatrix::from_pure(&PureState::bell());
        let tensor = build_concurrence_tensor(&spectral_ensemble(&bell));
        match build_tau(&tensor) {
            TauOutcome::Tau(tau) => {
                assert_eq!(tau.n(), 1);
                assert_abs_diff_eq!(tau.matrix()[(0, 0)].re, 1.0, epsilon = 1e-12);
            }
            TauOutcome::SeparableDominant => panic!("Bell state is entangled"),
        }
    }

    #[test]
    fn tau_flags_separable_dominant() {
        // Diagonal state dominated by the product vector |00⟩.
        let mut m = CMatrix::identity(4, 4) * C64::new(0.1 / 4.0, 0.0);
        m[(0, 0)] += C64::new(0.9, 0.0);
        let rho = DensityMatrix::new(2, 2, m).unwrap();
        let tensor = build_concurrence_tensor(&spectral_ensemble(&rho));
        assert!(matches!(build_tau(&tensor), TauOutcome::SeparableDominant));
        let qpa = qp_concurrence(&rho);
        assert_eq!(qpa.value, 0.0);
        assert!(qpa.separable_dominant);
    }

    #[test]
    fn tau_fast_path_matches_tensor_route() {
        let mut rng = ChaCha12Rng::seed_from_u64(63);
        for (d1, d2, rank) in [(2, 2, 3), (2, 3, 4), (3, 3, 6), (3, 5, 5)] {
            let rho = random_mixed_state(d1, d2, rank, &mut rng);
            let ensemble = spectral_ensemble(&rho);
            let via_tensor = build_tau(&build_concurrence_tensor(&ensemble));
            let direct = build_tau_from_ensemble(&ensemble);
            match (via_tensor, direct) {
                (TauOutcome::Tau(a), TauOutcome::Tau(b)) => {
                    assert!(max_abs(&(a.matrix() - b.matrix())) <= 1e-15);
                }
                (TauOutcome::SeparableDominant, TauOutcome::SeparableDominant) => {}
                _ => panic!("routes disagree on the separable-dominant signal"),
            }
        }
    }

    #[test]
    fn tau_entries_match_direct_tensor_ratio() {
        let rho = werner_state(0.8).unwrap();
        let tensor = build_concurrence_tensor(&spectral_ensemble(&rho));
        let TauOutcome::Tau(tau) = build_tau(&tensor) else {
            panic!("Werner 0.8 has an entangled dominant eigenvector");
        };
        assert_eq!(tau.n(), 4);
        let scale = tensor.entry(0, 0, 0, 0).re.sqrt();
        for j in 0..4 {
            for k in 0..4 {
                let expected = tensor.entry(j, k, 0, 0) / scale;
                assert!((tau.matrix()[(j, k)] - expected).norm() < 1e-12);
            }
        }
        assert!((tau.matrix().transpose() - tau.matrix())
            .iter()
            .all(|z| z.norm() == 0.0));
    }

    #[test]
    fn qpa_exact_on_pure_states() {
        let mut rng = ChaCha12Rng::seed_from_u64(40);
        for (d1, d2) in [(2, 2), (3, 3), (3, 5)] {
            let psi = PureState::random(d1, d2, &mut rng);
            let qpa = qp_concurrence(&DensityMatrix::from_pure(&psi));
            let exact = pure_concurrence(psi.amplitudes(), d1, d2).unwrap();
            assert!((qpa.value - exact).abs() <= 1e-10);
            assert!(!qpa.separable_dominant);
        }
    }

    #[test]
    fn qpa_bell_is_one() {
        let qpa = qp_concurrence(&DensityMatrix::from_pure(&PureState::bell()));
        assert_abs_diff_eq!(qpa.value, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(qpa.dominant_weight, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn qpa_werner_bounded_by_oracle() {
        let rho = werner_state(0.8).unwrap();
        let qpa = qp_concurrence(&rho);
        assert!(qpa.value > 0.0);
        assert!(qpa.value <= 0.7 + 1e-9);
    }

    #[test]
    fn ensemble_identity_recovers_eigensystem() {
        let rho = werner_state(0.6).unwrap();
        let e = spectral_ensemble(&rho);
        let v = CMatrix::identity(e.n(), e.n());
        let members = ensemble_from_left_unitary(&e, &v).unwrap();
        for (j, member) in members.iter().enumerate() {
            assert_abs_diff_eq!(member.norm_squared(), e.mu()[j], epsilon = 1e-12);
        }
    }

    #[test]
    fn ensemble_rank_one_phase_matrix() {
        let bell = DensityMatrix::from_pure(&PureState::bell());
        let e = spectral_ensemble(&bell);
        let theta = 0.83f64;
        let v = CMatrix::from_fn(1, 1, |_, _| C64::new(0.0, theta).exp());
        let members = ensemble_from_left_unitary(&e, &v).unwrap();
        assert_eq!(members.len(), 1);
        assert_abs_diff_eq!(members[0].norm_squared(), e.mu()[0], epsilon = 1e-12);
        // Same projector as the original state.
        let projector = &members[0] * members[0].adjoint();
        assert!(max_abs(&(projector - bell.matrix())) < 1e-12);
    }

    #[test]
    fn ensemble_haar_reconstructs_state() {
        let rho = horodecki_state(0.5).unwrap();
        let e = spectral_ensemble(&rho);
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let v = haar_left_unitary(e.n() + 2, e.n(), &mut rng);
        let members = ensemble_from_left_unitary(&e, &v).unwrap();
        let mut rebuilt = CMatrix::zeros(9, 9);
        for member in &members {
            rebuilt += member * member.adjoint();
        }
        assert!(max_abs(&(rebuilt - rho.matrix())) < 1e-9);
    }

    #[test]
    fn ensemble_rejects_non_left_unitary() {
        let rho = werner_state(0.6).unwrap();
        let e = spectral_ensemble(&rho);
        let v = CMatrix::identity(e.n(), e.n()) * C64::new(0.9, 0.0);
        assert!(matches!(
            ensemble_from_left_unitary(&e, &v),
            Err(Error::NotLeftUnitary { .. })
        ));
    }

    #[test]
    fn objective_identity_matches_eigen_average() {
        let rho = werner_state(0.8).unwrap();
        let e = spectral_ensemble(&rho);
        let tensor = build_concurrence_tensor(&e);
        let v = CMatrix::identity(e.n(), e.n());
        let objective = convex_roof_objective(&tensor, &v).unwrap();
        let direct: f64 = e
            .mu()
            .iter()
            .zip(e.phi())
            .map(|(&mu, phi)| {
                let member = phi * C64::new(mu.sqrt(), 0.0);
                pure_concurrence(&member, 2, 2).unwrap()
            })
            .sum();
        assert!((objective - direct).abs() < 1e-9);
        assert!(objective >= 0.0);
    }

    #[test]
    fn objective_rank_one_equals_pure_concurrence() {
        let bell = DensityMatrix::from_pure(&PureState::bell());
        let e = spectral_ensemble(&bell);
        let tensor = build_concurrence_tensor(&e);
        let v = CMatrix::identity(1, 1);
        assert_abs_diff_eq!(
            convex_roof_objective(&tensor, &v).unwrap(),
            1.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn brute_force_pure_state_recovers_concurrence() {
        let mut rng = ChaCha12Rng::seed_from_u64(12);
        let psi = PureState::random(2, 2, &mut rng);
        let rho = DensityMatrix::from_pure(&psi);
        let exact = pure_concurrence(psi.amplitudes(), 2, 2).unwrap();
        let estimate = brute_force_convex_roof(&rho, 4, 50, 7);
        assert!((estimate - exact).abs() < 1e-6);
    }

    #[test]
    fn brute_force_is_monotone_in_budget() {
        let rho = werner_state(0.8).unwrap();
        let short = brute_force_convex_roof(&rho, 2, 40, 99);
        let long = brute_force_convex_roof(&rho, 4, 80, 99);
        assert!(long <= short + 1e-12);
    }

    #[test]
    fn decompose_rank_one_pure_state() {
        let bell = DensityMatrix::from_pure(&PureState::bell());
        let tensor = build_concurrence_tensor(&spectral_ensemble(&bell));
        let d = decompose_tensor(&tensor);
        assert_eq!(d.matrices.len(), 1);
        assert_abs_diff_eq!(d.matrices[0][(0, 0)].norm(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn decompose_reconstructs_horodecki() {
        let tensor = build_concurrence_tensor(&spectral_ensemble(&horodecki_state(0.5).unwrap()));
        let d = decompose_tensor(&tensor);
        assert!(d.max_asymmetry <= 1e-9);
        let n = tensor.n();
        let mut worst = 0.0f64;
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    for m in 0..n {
                        let rebuilt: C64 = d
                            .matrices
                            .iter()
                            .map(|t| t[(j, k)] * t[(l, m)].conj())
                            .sum();
                        worst = worst.max((rebuilt - tensor.entry(j, k, l, m)).norm());
                    }
                }
            }
        }
        assert!(worst <= 1e-8, "reconstruction residual {worst}");
    }

    #[test]
    fn tau_membership_reference_cases() {
        for rho in [
            DensityMatrix::from_pure(&PureState::bell()),
            horodecki_state(0.5).unwrap(),
            werner_state(0.8).unwrap(),
        ] {
            let tensor = build_concurrence_tensor(&spectral_ensemble(&rho));
            let TauOutcome::Tau(tau) = build_tau(&tensor) else {
                panic!("dominant eigenvector unexpectedly separable");
            };
            match verify_tau_membership(&tensor, &tau) {
                TauMembership::Checked {
                    holds,
                    residual,
                    weight_norm,
                } => {
                    assert!(holds, "residual {residual}");
                    assert!((weight_norm - 1.0).abs() <= 1e-10);
                }
                TauMembership::SeparableDominant => panic!("unexpected degenerate signal"),
            }
        }
    }

    #[test]
    fn tau_membership_flags_separable_dominant() {
        let mut m = CMatrix::identity(4, 4) * C64::new(0.1 / 4.0, 0.0);
        m[(0, 0)] += C64::new(0.9, 0.0);
        let rho = DensityMatrix::new(2, 2, m).unwrap();
        let tensor = build_concurrence_tensor(&spectral_ensemble(&rho));
        // τ does not exist here; check the decomposition-side signal with a
        // placeholder τ of matching rank.
        let placeholder = TauMatrix {
            matrix: CMatrix::zeros(tensor.n(), tensor.n()),
        };
        assert!(matches!(
            verify_tau_membership(&tensor, &placeholder),
            TauMembership::SeparableDominant
        ));
    }
}
