use core::fmt;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the domain of the operation.
    Domain(&'static str),
    /// `ζ(B, 1+k0) = 1` has no root below the search ceiling.
    NoRoot { k0: f64, b_max: f64 },
    /// Requested tolerance cannot be met in double precision.
    ToleranceUnreachable { tol: f64, bound: f64 },
    /// Too few usable points for a fit.
    InsufficientData { needed: usize, got: usize },
    EmptyInput,
    RankOutOfRange { k: usize, n: usize },
    DepthTooLarge(u32),
    /// Tail mass of a covering below the space measure.
    InsufficientMass { k: usize, mass: f64 },
    EmptyCovering,
    /// Entropy is zero, so the cost ratio is undefined.
    DegenerateDistribution,
    NoConvergence { iterations: usize, residual: f64 },
    EmptyTable,
    /// Fewer than two usable rows or columns.
    DegenerateMatrix,
    StreamTooShort { len: usize, window: usize },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::NoRoot { k0, b_max } => {
                write!(f, "no root of zeta(B, 1+k0) = 1 for k0 = {k0} with B <= {b_max}")
            }
            Error::ToleranceUnreachable { tol, bound } => {
                write!(f, "tolerance {tol:e} unreachable (best bound {bound:e})")
            }
            Error::InsufficientData { needed, got } => {
                write!(f, "insufficient data: need {needed} points, got {got}")
            }
            Error::EmptyInput => f.write_str("empty input"),
            Error::RankOutOfRange { k, n } => write!(f, "rank {k} out of range 1..={n}"),
            Error::DepthTooLarge(d) => write!(f, "depth {d} too large (max 20)"),
            Error::InsufficientMass { k, mass } => {
                write!(f, "tail mass {mass} from rank {k} is below 1")
            }
            Error::EmptyCovering => f.write_str("empty covering"),
            Error::DegenerateDistribution => f.write_str("degenerate distribution (H = 0)"),
            Error::NoConvergence { iterations, residual } => {
                write!(f, "no convergence after {iterations} iterations (residual {residual:e})")
            }
            Error::EmptyTable => f.write_str("empty table"),
            Error::DegenerateMatrix => f.write_str("degenerate matrix"),
            Error::StreamTooShort { len, window } => {
                write!(f, "stream of {len} tokens too short for window {window}")
            }
        }
    }
}

impl core::error::Error for Error {}
