//! Error type shared by all modules.

use thiserror::Error;

/// Crate-wide error enumeration.
///
/// The CLI maps `InvalidInput`-like variants to exit code 1 and numerical
/// failures to exit code 2; see [`Error::exit_code`].
#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("scattering convention/accuracy failure: {0}")]
    ConventionFailure(String),

    #[error("jump factorization degenerates: |r({z})| = {abs_r} >= 1")]
    JumpDegenerate { z: f64, abs_r: f64 },

    #[error(
        "oscillation under-resolved: spacing {spacing:.3e} exceeds {required:.3e}; \
         at least {required_nodes} nodes needed on the window"
    )]
    UnderResolved {
        spacing: f64,
        required: f64,
        required_nodes: usize,
    },

    #[error("linear solver failed: {msg} (residual {residual:.3e}, condition estimate {cond_est:.3e})")]
    SolverFailure {
        msg: String,
        residual: f64,
        cond_est: f64,
    },

    #[error("reconstructed value has imaginary residue {residue:.3e} exceeding {bound:.3e}")]
    ImagResidue { residue: f64, bound: f64 },

    #[error("stationary phase point undefined for x = {x} >= 0")]
    NoStationaryPoint { x: f64 },

    #[error("|r| = {abs_r} >= 1: modulation exponent undefined")]
    ModulusOutOfRange { abs_r: f64 },

    #[error("degenerate phase: r(z0) = 0, arg r(z0) undefined (nu = 0, y_a = 0)")]
    DegeneratePhase,

    #[error("quadrature failed to converge: {0}")]
    QuadratureFailure(String),

    #[error("argument {arg} outside tabulated range [{lo}, {hi}]; extend the grid")]
    OutOfRange { arg: f64, lo: f64, hi: f64 },

    #[error("Painleve II solution blow-up detected at s = {s:.6} (|p| = {p_abs:.3e})")]
    PiiBlowUp { s: f64, p_abs: f64 },

    #[error("time stepping failed: {0}")]
    StepFailure(String),
}

impl Error {
    /// CLI exit code classification: 1 = input/config error, 2 = numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidPotential(_)
            | Error::InvalidGrid(_)
            | Error::InvalidConfig(_)
            | Error::Io { .. }
            | Error::Parse { .. }
            | Error::OutOfRange { .. }
            | Error::NoStationaryPoint { .. } => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
