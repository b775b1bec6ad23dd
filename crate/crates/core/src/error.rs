use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid trapezoid [{0}, {1}, {2}, {3}]: expected a <= b <= c <= d")]
    InvalidTrapezoid(f64, f64, f64, f64),

    #[error("invalid fuzzy number: {0}")]
    InvalidFuzzyNumber(String),

    #[error("alpha {0} is outside [0, 1]")]
    AlphaOutOfRange(f64),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("index {index} out of range for {len} elements")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("relation is not consistent: {x} >= {y} and {y} >= {z} but not {x} >= {z}")]
    Inconsistent { x: usize, y: usize, z: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("unsupported player count {0}: mixed equilibria are computed for two players only")]
    UnsupportedPlayerCount(usize),

    #[error("game too large: {0} strategies exceeds the limit of {1}")]
    GameTooLarge(usize, usize),

    #[error("invalid economy: {0}")]
    InvalidEconomy(String),

    #[error("invalid price vector: {0}")]
    InvalidPrice(String),

    #[error("negative consumption {value} for good {good}")]
    NegativeConsumption { good: usize, value: f64 },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}
