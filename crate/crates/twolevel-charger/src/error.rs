use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A value violated a domain precondition (negative resistance, duty
    /// outside [0, 1], zero parallel pair, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A requested operating point needs a duty ratio outside [0, 1].
    #[error("infeasible operating point: required duty {duty:.6} lies outside [0, 1]")]
    InfeasibleOperatingPoint { duty: f64 },

    /// The loop-gain magnitude never crosses 0 dB inside the evaluated range.
    #[error("frequency response never crosses 0 dB in the evaluated range")]
    NoCrossing,

    /// A polynomial lost its leading coefficient (degree collapsed under
    /// cancellation) or is identically zero.
    #[error("degenerate polynomial: {0}")]
    PolynomialDegeneracy(String),

    /// The simulated state stopped being finite.
    #[error("simulation diverged: non-finite state at t = {t:.9e} s")]
    Divergence { t: f64 },

    /// A metrics window does not fit the trace it was asked about.
    #[error("window error: {0}")]
    Window(String),

    /// A trace grid is not commensurate with the switching period.
    #[error("grid misalignment: {0}")]
    Misaligned(String),

    /// Configuration file problems (missing keys, unknown keys, bad units).
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit status for the CLI: 1 for validation problems,
    /// 2 for numeric failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::InfeasibleOperatingPoint { .. }
            | Error::Window(_)
            | Error::Misaligned(_)
            | Error::Config(_)
            | Error::Io(_) => 1,
            Error::NoCrossing | Error::PolynomialDegeneracy(_) | Error::Divergence { .. } => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
