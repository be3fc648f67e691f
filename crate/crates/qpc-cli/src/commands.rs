//! Implementations of the four subcommands. Each returns a [`CliError`]
//! mapped to a distinct exit code by `main`.

use std::io::Write;
use std::path::Path;

use qpc_core::concurrence::{brute_force_convex_roof, qp_concurrence, QpaResult};
use qpc_core::dynamics::{run_trajectory, SimConfig};
use qpc_core::linops::hermitian_eigendecomposition;
use qpc_core::states::{
    horodecki_state, partial_transpose_over_2, von_neumann_entropy, wootters_concurrence_2qubit,
    DensityMatrix,
};

use crate::statefile::read_density_matrix;
use crate::CliError;

/// Output format of `qpc qpa`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Human,
    Csv,
}

fn join_lambdas(lambdas: &[f64]) -> String {
    lambdas
        .iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

/// `qpc qpa <file>`: evaluate the quasi-pure estimate of a state file.
pub fn cmd_qpa(
    state_path: &Path,
    format: ReportFormat,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let rho = read_density_matrix(state_path)?;
    let qpa = qp_concurrence(&rho);
    let entropy = von_neumann_entropy(&rho);
    let QpaResult {
        value,
        lambdas,
        dominant_weight,
        separable_dominant,
        dominant_degenerate,
        truncated_weight,
    } = qpa;
    match format {
        ReportFormat::Csv => {
            writeln!(
                out,
                "c_qp,entropy,mu1,truncated_weight,separable_dominant,dominant_degenerate,lambdas"
            )
            .map_err(io_error)?;
            writeln!(
                out,
                "{value},{entropy},{dominant_weight},{truncated_weight},{separable_dominant},{dominant_degenerate},{}",
                join_lambdas(&lambdas)
            )
            .map_err(io_error)?;
        }
        ReportFormat::Human => {
            let mut flags = Vec::new();
            if separable_dominant {
                flags.push("separable_dominant");
            }
            if dominant_degenerate {
                flags.push("dominant_degenerate");
            }
            writeln!(
                out,
                "state            : {}x{} bipartite",
                rho.d1(),
                rho.d2()
            )
            .map_err(io_error)?;
            writeln!(out, "c_qp             : {value}").map_err(io_error)?;
            writeln!(out, "entropy (nats)   : {entropy}").map_err(io_error)?;
            writeln!(out, "mu1              : {dominant_weight}").map_err(io_error)?;
            writeln!(out, "truncated weight : {truncated_weight}").map_err(io_error)?;
            writeln!(
                out,
                "flags            : {}",
                if flags.is_empty() {
                    "none".to_string()
                } else {
                    flags.join(", ")
                }
            )
            .map_err(io_error)?;
            writeln!(
                out,
                "lambda           : {}",
                lambdas
                    .iter()
                    .map(|l| l.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            )
            .map_err(io_error)?;
        }
    }
    Ok(())
}

/// `qpc horodecki`: sweep the 3×3 family and emit
/// `a,c_qp,entropy,min_eig_pt` per grid point.
pub fn cmd_horodecki(
    a_min: f64,
    a_max: f64,
    steps: usize,
    out_path: &Path,
) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&a_min) || !(0.0..=1.0).contains(&a_max) || a_max < a_min {
        return Err(CliError::BadFlags(format!(
            "need 0 <= a-min <= a-max <= 1, got [{a_min}, {a_max}]"
        )));
    }
    if steps < 1 {
        return Err(CliError::BadFlags("steps must be at least 1".into()));
    }
    let mut csv = String::from("a,c_qp,entropy,min_eig_pt\n");
    for i in 0..steps {
        let a = if steps == 1 {
            a_min
        } else {
            a_min + (a_max - a_min) * i as f64 / (steps - 1) as f64
        };
        let rho = horodecki_state(a)?;
        let qpa = qp_concurrence(&rho);
        let entropy = von_neumann_entropy(&rho);
        let pt = partial_transpose_over_2(rho.matrix(), 3, 3)?;
        let min_eig_pt = *hermitian_eigendecomposition(&pt)?
            .values
            .last()
            .expect("9x9 spectrum is nonempty");
        csv.push_str(&format!("{a},{},{entropy},{min_eig_pt}\n", qpa.value));
    }
    std::fs::write(out_path, csv)
        .map_err(|e| CliError::Parse(format!("cannot write {}: {e}", out_path.display())))
}

/// Flag-level overrides applied on top of a config file (or defaults).
#[derive(Debug, Default, Clone)]
pub struct SimOverrides {
    pub d1: Option<usize>,
    pub d2: Option<usize>,
    pub d_bath: Option<usize>,
    pub alpha_s: Option<f64>,
    pub alpha_sb: Option<f64>,
    pub t_end: Option<f64>,
    pub t_steps: Option<usize>,
    pub seed: Option<u64>,
}

/// Resolve the effective configuration: defaults, then the config file,
/// then explicit flags.
pub fn resolve_sim_config(
    config_path: Option<&Path>,
    overrides: &SimOverrides,
) -> Result<SimConfig, CliError> {
    let mut config = match config_path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Parse(format!("invalid config {}: {e}", path.display())))?
        }
        None => SimConfig::default(),
    };
    if let Some(d1) = overrides.d1 {
        config.d1 = d1;
    }
    if let Some(d2) = overrides.d2 {
        config.d2 = d2;
    }
    if let Some(d_bath) = overrides.d_bath {
        config.d_bath = d_bath;
    }
    if let Some(alpha_s) = overrides.alpha_s {
        config.alpha_s = alpha_s;
    }
    if let Some(alpha_sb) = overrides.alpha_sb {
        config.alpha_sb = alpha_sb;
    }
    if let Some(t_end) = overrides.t_end {
        config.t_end = t_end;
    }
    if let Some(t_steps) = overrides.t_steps {
        config.t_steps = t_steps;
    }
    if let Some(seed) = overrides.seed {
        config.seed = seed;
    }
    config.validate()?;
    Ok(config)
}

/// `qpc simulate`: run the decoherence trajectory and emit
/// `t,c_qp,entropy,purity,mu1` rows under a seed-stamped header.
pub fn cmd_simulate(config: &SimConfig, out_path: &Path) -> Result<(), CliError> {
    let trajectory = run_trajectory(config)?;
    let mut csv = format!("# seed={}\n", config.seed);
    csv.push_str("t,c_qp,entropy,purity,mu1\n");
    for point in &trajectory.points {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            point.t, point.c_qp, point.entropy, point.purity, point.dominant_weight
        ));
    }
    std::fs::write(out_path, csv)
        .map_err(|e| CliError::Parse(format!("cannot write {}: {e}", out_path.display())))
}

/// `qpc oracle <file>`: compare the quasi-pure estimate against the
/// brute-force upper estimate (and, for two qubits, the exact spin-flip
/// concurrence), verifying the lower-bound ordering.
pub fn cmd_oracle(
    state_path: &Path,
    restarts: usize,
    iterations: usize,
    seed: u64,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let rho = read_density_matrix(state_path)?;
    let qpa = qp_concurrence(&rho);
    let upper = brute_force_convex_roof(&rho, restarts, iterations, seed);
    writeln!(out, "c_qp                 = {}", qpa.value).map_err(io_error)?;
    writeln!(
        out,
        "brute-force estimate = {upper} (restarts={restarts}, iterations={iterations}, seed={seed})"
    )
    .map_err(io_error)?;

    let mut violations = Vec::new();
    if qpa.value > upper + 1e-6 {
        violations.push(format!(
            "c_qp = {} exceeds the brute-force estimate {upper}",
            qpa.value
        ));
    }
    writeln!(
        out,
        "check c_qp <= brute-force + 1e-6 : {}",
        if qpa.value <= upper + 1e-6 {
            "ok"
        } else {
            "VIOLATED"
        }
    )
    .map_err(io_error)?;

    if rho.d1() == 2 && rho.d2() == 2 {
        let exact = wootters_concurrence_2qubit(&rho)?;
        writeln!(out, "wootters (exact)     = {exact}").map_err(io_error)?;
        let bound_ok = qpa.value <= exact + 1e-9;
        writeln!(
            out,
            "check c_qp <= wootters + 1e-9    : {}",
            if bound_ok { "ok" } else { "VIOLATED" }
        )
        .map_err(io_error)?;
        if !bound_ok {
            violations.push(format!(
                "c_qp = {} exceeds the exact concurrence {exact}",
                qpa.value
            ));
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(CliError::Invariant(violations.join("; ")))
    }
}

/// Install tolerance overrides from the file named by `QPC_TOL_OVERRIDE`,
/// when set.
pub fn install_tolerance_override() -> Result<(), CliError> {
    let Some(path) = std::env::var_os("QPC_TOL_OVERRIDE") else {
        return Ok(());
    };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::Parse(format!(
            "cannot read tolerance override {}: {e}",
            path.display()
        ))
    })?;
    let tolerances: qpc_core::tol::Tolerances = serde_json::from_str(&text).map_err(|e| {
        CliError::Parse(format!(
            "invalid tolerance override {}: {e}",
            path.display()
        ))
    })?;
    qpc_core::tol::install(tolerances)
        .map_err(|_| CliError::Parse("tolerances already installed".into()))
}

/// Re-export used by integration tests to build fixtures.
pub fn write_state_fixture(path: &Path, rho: &DensityMatrix) -> Result<(), CliError> {
    crate::statefile::write_density_matrix(path, rho)
}

fn io_error(e: std::io::Error) -> CliError {
    CliError::Parse(format!("write failed: {e}"))
}
