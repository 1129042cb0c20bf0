//! `dfsqft`: synthesize, verify and benchmark DFS-encoded QFT circuits.
//!
//! Exit status: 0 success, 1 verification or experiment failure, 2 usage
//! error.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};

use config::ConfigFile;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl From<dfsqft::Error> for CliError {
    fn from(e: dfsqft::Error) -> Self {
        match e {
            dfsqft::Error::UnknownEncoding(_)
            | dfsqft::Error::InvalidPolicy(_)
            | dfsqft::Error::InvalidBits(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(format!("i/o error: {e}"))
    }
}

macro_rules! value_enum_from_str {
    ($t:ty) => {
        impl FromStr for $t {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, String> {
                <$t as ValueEnum>::from_str(s, false)
            }
        }
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    Elementary,
    Block,
    Endpoints,
}
value_enum_from_str!(Policy);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}
value_enum_from_str!(Format);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistributionArg {
    Uniform,
    Gaussian,
}
value_enum_from_str!(DistributionArg);

#[derive(Debug, Parser)]
#[command(
    name = "dfsqft",
    version,
    about = "QFT circuits on decoherence-free subspaces"
)]
struct Cli {
    /// key=value file; command-line flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Output file (default: standard output).
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// RNG seed; falls back to $DFSQFT_SEED, then 0.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[arg(long, global = true)]
    trials: Option<usize>,

    /// Where noise strikes.
    #[arg(long, global = true, value_enum)]
    policy: Option<Policy>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the QFT circuit for an encoding in the text circuit format.
    Synth {
        /// plain, wcd or scd.
        encoding: Option<String>,
        /// Number of logical qubits.
        n: Option<usize>,
    },
    /// Run the invariant suite for an encoding and size.
    Verify {
        encoding: Option<String>,
        n: Option<usize>,
    },
    /// Encoded vs unencoded QFT under collective noise.
    NoiseBench {
        /// wcd or scd; the unencoded arm runs plain qubits under the same model.
        #[arg(long)]
        encoding: Option<String>,
        /// Number of logical qubits.
        #[arg(long)]
        n: Option<usize>,
        /// Logical input bits `s_n ... s_1` (default all zeros).
        #[arg(long)]
        input: Option<String>,
        #[arg(long, value_enum)]
        distribution: Option<DistributionArg>,
        /// Standard deviation for gaussian noise angles.
        #[arg(long)]
        sigma: Option<f64>,
    },
    /// Protected-sector dimensions and efficiencies for n = 1..=n_max.
    DfsTable {
        /// wcd or scd.
        model: Option<String>,
        n_max: Option<usize>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let common = commands::Common {
        out: file.pick(cli.out, "out")?,
        format: file.pick(cli.format, "format")?,
        config_path: cli.config.clone(),
    };
    match cli.command {
        Command::Synth { encoding, n } => commands::synth(
            &common,
            &file.require(encoding, "encoding")?,
            file.require(n, "n")?,
        ),
        Command::Verify { encoding, n } => commands::verify(
            &common,
            &file.require(encoding, "encoding")?,
            file.require(n, "n")?,
        ),
        Command::NoiseBench {
            encoding,
            n,
            input,
            distribution,
            sigma,
        } => commands::noise_bench(
            &common,
            commands::BenchArgs {
                encoding: file.require(encoding, "encoding")?,
                n: file.require(n, "n")?,
                input: file.pick(input, "input")?,
                trials: file.pick(cli.trials, "trials")?.unwrap_or(200),
                seed: file.seed(cli.seed)?,
                policy: file.pick(cli.policy, "policy")?.unwrap_or(Policy::Block),
                distribution: file
                    .pick(distribution, "distribution")?
                    .unwrap_or(DistributionArg::Uniform),
                sigma: file.pick(sigma, "sigma")?,
            },
        ),
        Command::DfsTable { model, n_max } => commands::dfs_table(
            &common,
            &file.require(model, "model")?,
            file.require(n_max, "n_max")?,
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(m) => eprintln!("error: {m}"),
                CliError::Failure(m) => eprintln!("failure: {m}"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
