//! `qpc`: quasi-pure concurrence estimation from the command line.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qpc_cli::commands::{
    cmd_horodecki, cmd_oracle, cmd_qpa, cmd_simulate, install_tolerance_override,
    resolve_sim_config, ReportFormat, SimOverrides,
};
use qpc_cli::CliError;

#[derive(Parser)]
#[command(
    name = "qpc",
    about = "Lower-bound concurrence estimation for bipartite mixed states",
    long_about = "Evaluates the quasi-pure concurrence estimate of density matrices, sweeps \
                  the Horodecki bound-entangled family, runs seeded decoherence trajectories, \
                  and cross-checks against brute-force and exact oracles. Set QPC_TOL_OVERRIDE \
                  to a JSON file to adjust numerical tolerances."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the quasi-pure concurrence estimate of a state file.
    Qpa {
        /// JSON state file ({"d1", "d2", "matrix": [[re, im], ...]}).
        state: PathBuf,
        #[arg(long, value_enum, default_value = "human")]
        format: Format,
    },
    /// Sweep the 3x3 Horodecki family and write a CSV.
    Horodecki {
        #[arg(long, default_value_t = 0.0)]
        a_min: f64,
        #[arg(long, default_value_t = 1.0)]
        a_max: f64,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a decoherence trajectory and write a CSV.
    Simulate {
        /// JSON config; missing fields fall back to defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        d1: Option<usize>,
        #[arg(long)]
        d2: Option<usize>,
        #[arg(long)]
        d_bath: Option<usize>,
        #[arg(long)]
        alpha_s: Option<f64>,
        #[arg(long)]
        alpha_sb: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        t_steps: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare the estimate against brute-force and exact oracles.
    Oracle {
        state: PathBuf,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 2000)]
        iterations: usize,
        #[arg(long, default_value_t = 1234)]
        seed: u64,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    install_tolerance_override()?;
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::Qpa { state, format } => {
            let format = match format {
                Format::Human => ReportFormat::Human,
                Format::Csv => ReportFormat::Csv,
            };
            cmd_qpa(&state, format, &mut stdout)
        }
        Command::Horodecki {
            a_min,
            a_max,
            steps,
            out,
        } => cmd_horodecki(a_min, a_max, steps, &out),
        Command::Simulate {
            config,
            d1,
            d2,
            d_bath,
            alpha_s,
            alpha_sb,
            t_end,
            t_steps,
            seed,
            out,
        } => {
            let overrides = SimOverrides {
                d1,
                d2,
                d_bath,
                alpha_s,
                alpha_sb,
                t_end,
                t_steps,
                seed,
            };
            let config = resolve_sim_config(config.as_deref(), &overrides)?;
            cmd_simulate(&config, &out)
        }
        Command::Oracle {
            state,
            restarts,
            iterations,
            seed,
        } => cmd_oracle(&state, restarts, iterations, seed, &mut stdout),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
