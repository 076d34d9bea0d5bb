use thiserror::Error;

/// Error type shared by every module of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("syntax error at column {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("resource cap exceeded: {0}")]
    ResourceExceeded(String),

    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("the symbol is the identity: every point is fixed")]
    IdentitySymbol,

    #[error("unsupported degree {degree}: {message}")]
    UnsupportedDegree { degree: usize, message: String },

    #[error("missing derivative of order {0}")]
    MissingDerivative(usize),

    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    #[error("no certificate with q <= {q_cap}; first offending samples (m, x, ratio): {witnesses:?}")]
    CertificateNotFound {
        q_cap: u32,
        witnesses: Vec<(usize, f64, f64)>,
    },

    #[error("iterate cap {cap} exceeded; largest N tried was {tried}")]
    IterateCapExceeded { cap: u32, tried: u32 },

    #[error("series diverges: partial-sum sup norm grew from {from:.3e} to {to:.3e} over {terms} terms")]
    Divergence { from: f64, to: f64, terms: usize },

    #[error("series did not converge within {0} terms")]
    NotConverged(usize),

    #[error("invalid bracket [{lo}, {hi}]: {message}")]
    InvalidBracket { lo: f64, hi: f64, message: String },

    #[error("grid too coarse: estimated interpolation error {estimate:.3e} exceeds tolerance {tol:.3e}")]
    GridTooCoarse { estimate: f64, tol: f64 },

    #[error("inconsistent monotone-symbol metadata: {0}")]
    InconsistentMetadata(String),

    #[error("no real fixed point: {0}")]
    NoRealFixedPoint(String),

    #[error("{0}")]
    Geometry(String),
}
