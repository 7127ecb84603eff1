//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Construction-time validation failure of a domain type.
    #[error("invalid {what}: {why}")]
    Invalid { what: &'static str, why: String },

    /// Adaptive integration could not proceed (step size underflow).
    #[error("ODE integration failed at x = {x}: step size underflow")]
    IntegrationFailure { x: f64 },

    /// A root scan found a different number of zeros than expected.
    #[error("root audit failed on [{lo}, {hi}]: expected {expected} zeros, found {found}")]
    MissedRoots {
        lo: f64,
        hi: f64,
        expected: usize,
        found: usize,
    },

    /// Eigenvalues below zero cannot be represented on the real lambda axis.
    #[error("negative eigenvalue detected near lambda^2 = {mu}; shift the problem upward")]
    NegativeEigenvalue { mu: f64 },

    /// A sequence limit failed its convergence gauge.
    #[error("{what} did not converge: spread {spread:.3e} exceeds {limit:.3e}")]
    NonConvergence {
        what: &'static str,
        spread: f64,
        limit: f64,
    },

    /// |b2/b1| too small for the discontinuity position to be identifiable.
    #[error("degenerate ratio |b2/b1| = {ratio:.3e}: discontinuity position unidentifiable (a1 = 1 case)")]
    DegenerateRatio { ratio: f64 },

    /// A sample divisor at an interpolation node is numerically zero.
    #[error("node degeneracy at lambda = {node}: divisor magnitude {value:.3e}")]
    NodeDegeneracy { node: f64, value: f64 },

    /// The right-half characteristic value vanishes at the origin.
    #[error("phi2(1/2, 0) = 0; apply a spectral shift and retry")]
    ZeroNode,

    /// Truncated interpolation series disagree beyond the stability gate.
    #[error("interpolation truncation unstable: half/full truncations differ by {diff:.3e}")]
    TruncationInstability { diff: f64 },

    /// The Jost function vanishes on the closed upper imaginary axis.
    #[error("Jost function vanishes near tau = {tau}; apply a spectral shift and retry")]
    JostZero { tau: f64 },

    /// Large-lambda tail of S - 1 does not match the fitted rational model.
    #[error("scattering tail fit residual {residual:.3e} exceeds {limit:.3e}")]
    TailFit { residual: f64, limit: f64 },

    /// A Nystrom system is too ill-conditioned to trust.
    #[error("Marchenko system ill-conditioned at x = {x}: condition estimate {cond:.3e}")]
    IllConditioned { x: f64, cond: f64 },

    /// Every probe frequency for the boundary-coefficient formula degenerated.
    #[error("boundary coefficient recovery: all denominators below {floor:.3e}")]
    SmallDenominators { floor: f64 },

    /// A norming constant violated positivity.
    #[error("norming constant alpha_{n} = {value:.3e} is not positive")]
    NonPositiveAlpha { n: usize, value: f64 },

    /// The final left-half recovery step needs an external implementation.
    #[error("final recovery step requires a registered plugin (none found for key {key:?})")]
    PluginMissing { key: String },

    /// A documented theorem hypothesis failed; the message names the condition.
    #[error("hypothesis violated: {condition}")]
    Hypothesis { condition: String },

    /// Paired-factor tail of an infinite product fails its summability gate.
    #[error("product tail diverges: paired-factor deviation grows with index (gauge {gauge:.3e})")]
    ProductDivergence { gauge: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(what: &'static str, why: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            why: why.into(),
        }
    }

    pub fn hypothesis(condition: impl Into<String>) -> Self {
        Error::Hypothesis {
            condition: condition.into(),
        }
    }

    /// Exit status class used by the command-line front end: 2 for violated
    /// hypotheses, 1 for numerical failures.
    pub fn exit_class(&self) -> i32 {
        match self {
            Error::Hypothesis { .. } | Error::DegenerateRatio { .. } => 2,
            _ => 1,
        }
    }
}
