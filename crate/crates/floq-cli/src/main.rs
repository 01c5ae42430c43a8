//! `floq` — batch experiments on shuffle-coupled Floquet Clifford circuits.
//!
//! Every subcommand is a pure function of its flags: reference qubits are
//! either given explicitly or drawn from a seeded chacha8 stream whose seed
//! lands in the output metadata, so identical invocations produce identical
//! bytes.

mod commands;
mod output;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum LayoutArg {
    Single,
    Double,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Parser, Debug)]
#[command(
    name = "floq",
    version,
    about = "Shuffle-coupled Floquet Clifford circuits: partitions, spreading, entropy, erasure recovery"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,

    /// Side length N of the qubit matrix (comma-separated list for `lyapunov`).
    #[arg(short = 'N', long = "side", global = true, value_delimiter = ',')]
    pub n: Vec<usize>,

    /// Qubit-matrix layout.
    #[arg(long, global = true, value_enum, default_value_t = LayoutArg::Single)]
    pub layout: LayoutArg,

    /// Interaction partition rule: 1 (needs 4 | N) or 2 (needs 2 | N).
    #[arg(long, global = true, default_value = "2")]
    pub rule: String,

    /// Four-qubit gate: W, W_new, or an inline program like "H q1; CNOT q1 q2".
    #[arg(long, global = true, default_value = "W")]
    pub gate: String,

    /// Number of Floquet steps (command-specific default when omitted).
    #[arg(long, global = true)]
    pub tmax: Option<usize>,

    /// Operator-size threshold override for scrambling times.
    #[arg(long, global = true)]
    pub threshold: Option<usize>,

    /// Reference qubits (linear indices); sampled with the seeded RNG when omitted.
    #[arg(long, global = true, value_delimiter = ',')]
    pub refs: Option<Vec<usize>>,

    /// Region / erasure sizes.
    #[arg(long, global = true, value_delimiter = ',')]
    pub rlist: Option<Vec<usize>>,

    /// Seed for the chacha8 reference sampler.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Dump and validate the four-qubit interaction partition.
    Partition,
    /// Infection-front sizes spreading from reference seeds.
    Infect,
    /// Operator size n(t) for the X and Z operators of one reference qubit.
    Opsize,
    /// Entanglement entropy S_A(t) of regions grown around a reference qubit.
    Entropy,
    /// Erasure-recovery scan over (reference, r, t), erasing the encoding region.
    Hp,
    /// Non-monotonicity flags and general recovery time of an erasure scan.
    ScanNonmono,
    /// Scrambling-time sweep over N and the Lyapunov-exponent fit.
    Lyapunov,
    /// Construction self-checks for one configuration.
    Validate,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or an impossible configuration: exit code 2.
    Config(String),
    /// A construction self-check failed: exit code 3.
    Invariant(String),
    Io(std::io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) | CliError::Invariant(m) => f.write_str(m),
            CliError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl From<floq::Error> for CliError {
    fn from(e: floq::Error) -> Self {
        match e {
            floq::Error::InvariantViolation(_) => CliError::Invariant(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
