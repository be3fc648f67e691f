//! On-disk density-matrix format.
//!
//! A state file is JSON with explicit real/imaginary pairs, row-major:
//!
//! ```json
//! {
//!   "d1": 2,
//!   "d2": 2,
//!   "matrix": [[0.5, 0.0], [0.0, 0.0], ...]
//! }
//! ```
//!
//! `matrix` must hold (d1·d2)² pairs. Reading validates the full set of
//! density-matrix invariants; writing emits 17 significant digits so a
//! round trip reproduces every f64 bit-exactly.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use qpc_core::{CMatrix, DensityMatrix, C64};

use crate::CliError;

#[derive(Deserialize)]
struct StateFile {
    d1: usize,
    d2: usize,
    matrix: Vec<[f64; 2]>,
}

/// Read and validate a state file.
pub fn read_density_matrix(path: &Path) -> Result<DensityMatrix, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    let parsed: StateFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("invalid state file {}: {e}", path.display())))?;
    let dim = parsed.d1 * parsed.d2;
    if dim == 0 {
        return Err(CliError::Parse(format!(
            "invalid state file {}: dimensions must be positive, got {}x{}",
            path.display(),
            parsed.d1,
            parsed.d2
        )));
    }
    if parsed.matrix.len() != dim * dim {
        return Err(CliError::Parse(format!(
            "invalid state file {}: expected {} matrix entries for a {}x{} state, got {}",
            path.display(),
            dim * dim,
            parsed.d1,
            parsed.d2,
            parsed.matrix.len()
        )));
    }
    let matrix = CMatrix::from_fn(dim, dim, |i, j| {
        let [re, im] = parsed.matrix[i * dim + j];
        C64::new(re, im)
    });
    DensityMatrix::new(parsed.d1, parsed.d2, matrix).map_err(CliError::from)
}

/// Serialize a density matrix in the state-file format.
pub fn to_state_file_string(rho: &DensityMatrix) -> String {
    let dim = rho.dim();
    let m = rho.matrix();
    let mut out = String::new();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"d1\": {},", rho.d1());
    let _ = writeln!(out, "  \"d2\": {},", rho.d2());
    let _ = writeln!(out, "  \"matrix\": [");
    for i in 0..dim {
        for j in 0..dim {
            let z = m[(i, j)];
            let separator = if i == dim - 1 && j == dim - 1 {
                ""
            } else {
                ","
            };
            let _ = writeln!(out, "    [{:.16e}, {:.16e}]{separator}", z.re, z.im);
        }
    }
    let _ = writeln!(out, "  ]");
    out.push('}');
    out.push('\n');
    out
}

/// Write a density matrix to a state file.
pub fn write_density_matrix(path: &Path, rho: &DensityMatrix) -> Result<(), CliError> {
    std::fs::write(path, to_state_file_string(rho))
        .map_err(|e| CliError::Parse(format!("cannot write {}: {e}", path.display())))
}
