mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "neutromap", version, about = "Fuzzy and neutrosophic cognitive map toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a seed through a map until a fixed point or limit cycle appears.
    Infer(InferArgs),
    /// Add several maps (optionally weighted) into one.
    Combine(CombineArgs),
    /// Chain relational maps into a hidden map between the outer catalogs.
    Link(LinkArgs),
    /// Degrees, density, hierarchy index, key vertices and affected branches.
    Metrics(MapArg),
    /// Semicycle counts and balance degrees.
    Balance(BalanceArgs),
    /// Alpha-cut fuzzification of a labelled numeric table.
    Alpha(AlphaArgs),
    /// Build a cognitive map from time series by membership similarity.
    Autoconstruct(AutoArgs),
    /// Check a map against the simple-map rules.
    Validate(ValidateArgs),
}

#[derive(Args, Debug)]
pub struct MapArg {
    /// Map document (JSON).
    pub map: PathBuf,
}

#[derive(Args, Debug)]
pub struct InferArgs {
    /// Map document (JSON).
    pub map: PathBuf,
    /// Concepts switched ON in the seed.
    #[arg(long, value_delimiter = ',', conflicts_with = "seed_vector")]
    pub seed: Vec<String>,
    /// Positional seed such as "1 0 0 1 0".
    #[arg(long)]
    pub seed_vector: Option<String>,
    /// Space the seed lives in (relational maps only).
    #[arg(long, value_enum, default_value_t = SeedSpace::Domain)]
    pub seed_space: SeedSpace,
    /// Concepts held ON after every step; defaults to the seed's ON concepts.
    #[arg(long, value_delimiter = ',', conflicts_with = "no_clamp")]
    pub clamp: Vec<String>,
    /// Clamp nothing.
    #[arg(long)]
    pub no_clamp: bool,
    /// Threshold constant k, as a rational ("0", "1/2", "0.5").
    #[arg(long, default_value = "0")]
    pub threshold: String,
    /// Iteration budget; defaults to 2 * 3^n, capped.
    #[arg(long)]
    pub max_iter: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeedSpace {
    Domain,
    Range,
}

#[derive(Args, Debug)]
pub struct CombineArgs {
    /// Map documents of one kind.
    #[arg(required = true)]
    pub maps: Vec<PathBuf>,
    /// Non-negative weight per map, as rationals.
    #[arg(long, value_delimiter = ',')]
    pub weights: Vec<String>,
    /// Where to write the combined document.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LinkArgs {
    /// Relational map documents in chain order.
    #[arg(required = true, num_args = 2..)]
    pub maps: Vec<PathBuf>,
    /// Where to write the hidden map document.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BalanceArgs {
    /// Map document (JSON).
    pub map: PathBuf,
    /// Longest semicycle or path considered; defaults to the concept count.
    #[arg(long)]
    pub max_len: Option<usize>,
    /// Length weight f(m) for the weighted degrees.
    #[arg(long, value_enum, default_value_t = Weight::Inverse)]
    pub length_weight: Weight,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Weight {
    /// 1/m
    Inverse,
    /// 1/m^2
    InverseSquare,
    /// 1/2^m
    InverseExp2,
}

#[derive(Args, Debug)]
pub struct AlphaArgs {
    /// CSV: header of column labels, then one labelled row per line.
    pub data: PathBuf,
    /// Divide every value by this to get the average matrix.
    #[arg(long, default_value_t = 1.0)]
    pub divisor: f64,
    /// Alpha values; defaults to 0.1, 0.2, ..., 1.0.
    #[arg(long, value_delimiter = ',')]
    pub grid: Vec<f64>,
    /// Column deviation rule.
    #[arg(long, value_enum, default_value_t = Deviation::Absolute)]
    pub deviation: Deviation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Deviation {
    /// sqrt(mean(d^2) - mean(d)^2) over absolute deviations d.
    Absolute,
    /// Population standard deviation.
    Standard,
}

#[derive(Args, Debug)]
pub struct AutoArgs {
    /// CSV: header "label,<concept>,...", then one observation per line.
    pub data: PathBuf,
    /// Minimum similarity for an edge, in (0, 1].
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    #[arg(long, value_enum, default_value_t = Metric::MeanAbs)]
    pub metric: Metric,
    /// Where to write the map document.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    /// Mean absolute difference.
    MeanAbs,
    /// Square root of the summed squared differences.
    Rms,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    /// Map document (JSON).
    pub map: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Any)]
    pub mode: Mode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Zero diagonal only.
    Any,
    /// Entries in {-1, 0, 1}.
    Fcm,
    /// Entries in {-1, 0, 1, I}.
    Ncm,
}

/// Exit status for a run that completed without settling.
pub const NON_CONVERGENT: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let f = cli.format;
    let result = match cli.command {
        Command::Infer(a) => commands::infer(a, f),
        Command::Combine(a) => commands::combine(a, f),
        Command::Link(a) => commands::link(a, f),
        Command::Metrics(a) => commands::metrics(a, f),
        Command::Balance(a) => commands::balance(a, f),
        Command::Alpha(a) => commands::alpha(a, f),
        Command::Autoconstruct(a) => commands::autoconstruct(a, f),
        Command::Validate(a) => commands::validate(a, f),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
