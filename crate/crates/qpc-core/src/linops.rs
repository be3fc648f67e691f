//! Dense complex linear-algebra kernels.
//!
//! Everything here is a pure function of its inputs and safe to call from
//! any number of threads. The eigensolver backend is nalgebra's Hermitian
//! `SymmetricEigen`; on top of it this module fixes an output convention
//! that nalgebra does not: eigenvalues sorted descending, each eigenvector
//! phase-fixed (first non-negligible entry real positive), and
//! near-degenerate eigenvalues ordered by a lexicographic comparison of
//! the phase-fixed eigenvector entries. That makes repeated runs emit
//! identical results even for degenerate spectra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Eigenvalues (descending) and matching eigenvector columns of a
/// Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Eigendecomposition {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

/// Max entrywise |M - M†| over the strict upper triangle and diagonal.
pub fn hermiticity_violation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Max entrywise |M - Mᵀ|.
pub fn symmetry_violation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).norm());
        }
    }
    worst
}

/// Max entrywise absolute value.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// Tr(A·B) without forming the product.
pub(crate) fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    debug_assert_eq!(a.nrows(), b.ncols());
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

pub(crate) fn ensure_finite(m: &CMatrix) -> Result<()> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFiniteEntry { row: i, col: j });
            }
        }
    }
    Ok(())
}

fn ensure_square(m: &CMatrix, context: &'static str) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::dimension(
            context,
            "square matrix",
            format!("{}x{}", m.nrows(), m.ncols()),
        ));
    }
    Ok(())
}

pub(crate) fn ensure_hermitian(m: &CMatrix, context: &'static str) -> Result<()> {
    ensure_square(m, context)?;
    ensure_finite(m)?;
    let violation = hermiticity_violation(m);
    let tolerance = tol::current().hermiticity;
    if violation > tolerance {
        return Err(Error::NotHermitian {
            violation,
            tolerance,
        });
    }
    Ok(())
}

/// Multiply a vector by the phase that makes its first entry with
/// magnitude above `cutoff` real positive.
fn phase_fix(v: &mut CVector, cutoff: f64) {
    if let Some(z) = v.iter().find(|z| z.norm() > cutoff) {
        let phase = z / z.norm();
        let correction = phase.conj();
        for entry in v.iter_mut() {
            *entry *= correction;
        }
    }
}

/// Lexicographic order on (re, im) pairs; used only to break eigenvalue
/// ties deterministically.
fn lex_compare(a: &CVector, b: &CVector) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.re.partial_cmp(&y.re).unwrap_or(std::cmp::Ordering::Equal) {
            std::cmp::Ordering::Equal => {}
            other => return other,
        }
        match x.im.partial_cmp(&y.im).unwrap_or(std::cmp::Ordering::Equal) {
            std::cmp::Ordering::Equal => {}
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Rejects inputs whose hermiticity violation exceeds the configured
/// tolerance, carrying the measured violation in the error. Eigenvalues
/// come back sorted descending; eigenvector columns are orthonormal,
/// phase-fixed, and tie-broken as described in the module docs.
pub fn hermitian_eigendecomposition(m: &CMatrix) -> Result<Eigendecomposition> {
    ensure_hermitian(m, "hermitian_eigendecomposition")?;
    let n = m.nrows();
    if n == 0 {
        return Ok(Eigendecomposition {
            values: Vec::new(),
            vectors: CMatrix::zeros(0, 0),
        });
    }
    let eig = m.clone().symmetric_eigen();
    let mut pairs: Vec<(f64, CVector)> = (0..n)
        .map(|k| {
            let mut v: CVector = eig.eigenvectors.column(k).into_owned();
            phase_fix(&mut v, 1e-12);
            (eig.eigenvalues[k], v)
        })
        .collect();
    // Descending by eigenvalue, lexicographic within degenerate groups.
    let gap = tol::current().degeneracy_gap;
    pairs.sort_by(|a, b| {
        if (a.0 - b.0).abs() <= gap {
            lex_compare(&a.1, &b.1)
        } else {
            b.0.partial_cmp(&a.0).unwrap()
        }
    });
    let values: Vec<f64> = pairs.iter().map(|(v, _)| *v).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (k, (_, v)) in pairs.iter().enumerate() {
        vectors.set_column(k, v);
    }
    Ok(Eigendecomposition { values, vectors })
}

/// Singular values of a complex symmetric matrix, descending.
///
/// Computed from the Hermitian embedding `[[0, τ], [τ†, 0]]`, whose
/// spectrum is `{±λᵢ}`; the returned λᵢ are therefore obtained without
/// squaring τ, independently of the ττ† route used to define them.
pub fn symmetric_singular_values(tau: &CMatrix) -> Result<Vec<f64>> {
    ensure_square(tau, "symmetric_singular_values")?;
    ensure_finite(tau)?;
    let violation = symmetry_violation(tau);
    let tolerance = tol::current().symmetry;
    if violation > tolerance {
        return Err(Error::NotSymmetric {
            violation,
            tolerance,
        });
    }
    let n = tau.nrows();
    let mut embedded = CMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            embedded[(i, n + j)] = tau[(i, j)];
            embedded[(n + i, j)] = tau[(j, i)].conj();
        }
    }
    let eig = hermitian_eigendecomposition(&embedded)?;
    // Top n of the ±λ pairs, clamping the noise floor around zero.
    Ok(eig.values.iter().take(n).map(|&v| v.max(0.0)).collect())
}

/// Unitary propagator `exp(iHt)` of a Hermitian generator.
pub fn matrix_exponential_unitary(h: &CMatrix, t: f64) -> Result<CMatrix> {
    let eig = hermitian_eigendecomposition(h)?;
    Ok(propagator_from_eigensystem(&eig, t))
}

/// `exp(iHt)` assembled from a precomputed eigensystem of H.
///
/// Lets time-series callers diagonalize once and rephase per time point.
pub fn propagator_from_eigensystem(eig: &Eigendecomposition, t: f64) -> CMatrix {
    let n = eig.values.len();
    let mut scaled = eig.vectors.clone();
    for (k, &energy) in eig.values.iter().enumerate() {
        let phase = C64::new(0.0, energy * t).exp();
        for i in 0..n {
            scaled[(i, k)] *= phase;
        }
    }
    &scaled * eig.vectors.adjoint()
}

/// Kronecker product `A ⊗ B`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// `n x n` identity.
pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}
