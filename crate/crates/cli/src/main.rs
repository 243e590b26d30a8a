//! `histate` — discrete-clock history-state simulations from the command
//! line. Every run is deterministic given the seed; results land in CSV
//! or JSON with a metadata preamble.

mod config;
mod modes;
mod output;
mod verify;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{load_file, merge, Params};
use output::{Format, Table};

#[derive(Parser)]
#[command(name = "histate", version, about = "History-state entanglement toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct Common {
    /// TOML scenario file; command-line flags override its values.
    #[arg(long)]
    config: Option<String>,
    /// Output path, `-` for standard output.
    #[arg(long)]
    output: Option<String>,
    /// Output format: csv or json.
    #[arg(long)]
    format: Option<String>,
    /// RNG seed for every randomized quantity.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Default)]
struct ParamFlags {
    /// Clock dimension; sweeps accept a comma list with optional `inf`.
    #[arg(long = "N")]
    n: Option<String>,
    /// Number of clock qubits (circuit mode).
    #[arg(long)]
    n_qubits: Option<usize>,
    /// System dimension when generating random instances.
    #[arg(long = "M")]
    m: Option<usize>,
    /// Single rotation angle.
    #[arg(long)]
    phi: Option<f64>,
    /// Angle grid `start:stop:step`.
    #[arg(long)]
    phi_grid: Option<String>,
    /// Mixture weight in [0, 1].
    #[arg(long)]
    p: Option<f64>,
    /// Local rotation angle.
    #[arg(long)]
    theta: Option<f64>,
    /// Comma list of energy levels.
    #[arg(long)]
    energies: Option<String>,
    /// Eigenbasis: identity or random.
    #[arg(long)]
    basis: Option<String>,
    /// Initial state amplitudes, e.g. `0.6,0.8i`.
    #[arg(long)]
    psi0: Option<String>,
    /// Initial qubit state of the observed subsystem.
    #[arg(long)]
    psi0_b: Option<String>,
    /// Spectral coefficients on the cyclic grid.
    #[arg(long)]
    c: Option<String>,
    /// Step unitary: identity, x, ry:<theta>, or random.
    #[arg(long = "U")]
    u: Option<String>,
    /// Verify suite: fast, full, or all (alias of full).
    #[arg(long)]
    suite: Option<String>,
}

impl ParamFlags {
    fn into_params(self) -> Params {
        Params {
            n: self.n,
            n_qubits: self.n_qubits,
            m: self.m,
            phi: self.phi,
            phi_grid: self.phi_grid,
            p: self.p,
            theta: self.theta,
            seed: None,
            energies: self.energies,
            basis: self.basis,
            psi0: self.psi0,
            psi0_b: self.psi0_b,
            c: self.c,
            u: self.u,
            suite: self.suite,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a history state and tabulate its per-time data.
    History {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: ParamFlags,
    },
    /// Cross-check the qubit-register circuit against the dense route.
    Circuit {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: ParamFlags,
    },
    /// Two-time clock: occupation probabilities and entanglement.
    QubitClock {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: ParamFlags,
    },
    /// Discretized rotation path: closed form vs dense sweep.
    BlochPath {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: ParamFlags,
    },
    /// Spectral weights, spread entropy, and the majorization check.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: ParamFlags,
    },
    /// Conjugate-representation entropic uncertainty data.
    Uncertainty {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: ParamFlags,
    },
    /// Mixed two-time subsystem: concurrence and fidelity identities.
    Subsystem {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: ParamFlags,
    },
    /// Rerun the full cross-check suite; exits 2 on the first failure.
    Verify {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        params: ParamFlags,
    },
}

impl Command {
    fn parts(self) -> (&'static str, Common, Params) {
        match self {
            Command::History { common, params } => ("history", common, params.into_params()),
            Command::Circuit { common, params } => ("circuit", common, params.into_params()),
            Command::QubitClock { common, params } => {
                ("qubit-clock", common, params.into_params())
            }
            Command::BlochPath { common, params } => {
                ("bloch-path", common, params.into_params())
            }
            Command::Spectrum { common, params } => ("spectrum", common, params.into_params()),
            Command::Uncertainty { common, params } => {
                ("uncertainty", common, params.into_params())
            }
            Command::Subsystem { common, params } => {
                ("subsystem", common, params.into_params())
            }
            Command::Verify { common, params } => ("verify", common, params.into_params()),
        }
    }
}

fn setup_threads() -> Result<(), String> {
    let Ok(spec) = std::env::var("CHRONO_THREADS") else {
        return Ok(());
    };
    let n: usize = spec
        .trim()
        .parse()
        .map_err(|_| format!("CHRONO_THREADS must be a number, got '{spec}'"))?;
    if n == 0 {
        return Ok(()); // 0 = automatic: keep rayon's default pool
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| format!("cannot size the thread pool: {e}"))
}

/// Exit 0 on success, 1 on a validation problem, 2 on a verify failure.
fn run() -> Result<(), (u8, String)> {
    let cli = Cli::parse();
    let (mode, common, flag_params) = cli.command.parts();

    setup_threads().map_err(|e| (1, e))?;

    let file = match &common.config {
        Some(path) => load_file(path).map_err(|e| (1, e))?,
        None => Default::default(),
    };
    if let Some(file_mode) = &file.mode {
        if file_mode != mode {
            return Err((
                1,
                format!("config declares mode '{file_mode}' but the subcommand is '{mode}'"),
            ));
        }
    }
    let params = merge(flag_params, file.parameters);
    let seed = common.seed.or(params.seed).unwrap_or(0);

    let out_section = file.output.unwrap_or_default();
    let path = common
        .output
        .or(out_section.path)
        .unwrap_or_else(|| "-".to_string());
    let format: Format = common
        .format
        .or(out_section.format)
        .unwrap_or_else(|| "csv".to_string())
        .parse()
        .map_err(|e: String| (1, e))?;

    let table: Table = match mode {
        "history" => modes::history(&params, seed),
        "circuit" => modes::circuit(&params, seed),
        "qubit-clock" => modes::qubit_clock_mode(&params, seed),
        "bloch-path" => modes::bloch_path_mode(&params, seed),
        "spectrum" => modes::spectrum(&params, seed),
        "uncertainty" => modes::uncertainty(&params, seed),
        "subsystem" => modes::subsystem(&params, seed),
        "verify" => {
            let suite = params.suite.as_deref().unwrap_or("fast");
            if !matches!(suite, "fast" | "full" | "all") {
                return Err((
                    1,
                    format!("unknown suite '{suite}' (expected fast, full, or all)"),
                ));
            }
            return match verify::run(suite, seed) {
                Ok(table) => table
                    .write(&path, format)
                    .map_err(|e| (1, format!("cannot write output: {e}"))),
                Err(msg) => Err((2, msg)),
            };
        }
        _ => unreachable!("subcommands are exhaustive"),
    }
    .map_err(|e| (1, e))?;

    table
        .write(&path, format)
        .map_err(|e| (1, format!("cannot write output: {e}")))
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("histate: {msg}");
            ExitCode::from(code)
        }
    }
}
