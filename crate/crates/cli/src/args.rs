use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fuzzyeq_core::Method;

#[derive(Debug, Parser)]
#[command(name = "fuzzyeq", version, about = "Fuzzy numbers, preferences, games and exchange equilibria")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Output format on stdout.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Also write the machine-readable record to this path.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Comparison or residual tolerance; the default depends on the command.
    #[arg(long, env = "FUZZYEQ_TOL", global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fuzzy-number utilities.
    #[command(subcommand)]
    Fuzzy(FuzzyCommand),
    /// Fuzzy preference relations.
    #[command(subcommand)]
    Preference(PreferenceCommand),
    /// Games with fuzzy payoffs.
    #[command(subcommand)]
    Game(GameCommand),
    /// Pure exchange economies.
    #[command(subcommand)]
    Economy(EconomyCommand),
    /// Brute-force grid checks.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Subcommand)]
pub enum FuzzyCommand {
    /// Expected values, supports, cores and ranking of a list of fuzzy numbers.
    Inspect { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum PreferenceCommand {
    /// Consistency verdict, indifference classes and utility assignment.
    Check { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum GameCommand {
    /// Pure equilibria, mixed equilibria for two players, and their verification.
    Solve { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum EconomyCommand {
    /// Computes a competitive equilibrium.
    Solve {
        file: PathBuf,
        #[arg(long, value_parser = parse_method, default_value = "ascent")]
        method: Method,
        #[arg(long)]
        max_iter: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Checks a candidate price and allocation.
    Verify {
        file: PathBuf,
        /// Comma-separated prices, e.g. `0.6,0.4`.
        #[arg(long, value_parser = parse_vector)]
        price: Vector,
        /// Agents separated by `;`, goods by `,`, e.g. `1,2;3,1`.
        #[arg(long, value_parser = parse_matrix)]
        alloc: Matrix,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Grid maximization of every agent's expected utility at a price.
    Demand {
        file: PathBuf,
        #[arg(long)]
        resolution: Option<f64>,
        /// Non-negative price weights; rescaled onto the simplex.
        #[arg(long, value_parser = parse_vector)]
        price: Vector,
        /// Per-good upper bounds, required when a price is zero.
        #[arg(long, value_parser = parse_vector)]
        bounds: Option<Vector>,
    },
    /// Scan of second-good prices for the smallest equilibrium violation.
    Equilibrium {
        file: PathBuf,
        #[arg(long)]
        resolution: Option<f64>,
    },
}

// Newtypes so clap treats each list as a single value.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(pub Vec<f64>);

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix(pub Vec<Vec<f64>>);

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|_| "expected ascent, bisect or closed-form".to_string())
}

fn parse_vector(s: &str) -> Result<Vector, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(Vector)
}

fn parse_matrix(s: &str) -> Result<Matrix, String> {
    s.split(';').map(|row| parse_vector(row).map(|v| v.0)).collect::<Result<_, _>>().map(Matrix)
}
