use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("derivative of order {requested} requested, at most {max} available")]
    DerivativeOrder { requested: usize, max: usize },

    #[error("quadrature did not converge: best estimate {estimate_re} + {estimate_im}i, error {error:e}")]
    NotConverged {
        estimate_re: f64,
        estimate_im: f64,
        error: f64,
    },

    #[error("poles {left} and {right} are closer than twice the largest excision radius {max_excision}")]
    PoleSeparation {
        left: f64,
        right: f64,
        max_excision: f64,
    },

    #[error("singularity at {pole} is not principal-value integrable (excision values diverge)")]
    NotPvIntegrable { pole: f64 },

    #[error("extrapolation does not converge: {0}")]
    Extrapolation(String),

    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("errors are below the noise floor (exact agreement); no order can be fitted")]
    BelowNoiseFloor,

    #[error("tau sample ({0}, {1}) is not inside the conjugate cone")]
    OutsideConjugateCone(f64, f64),

    #[error("symbol is not finite at ({0}, {1})")]
    NonFiniteSymbol(f64, f64),

    #[error("solvability condition |kappa - s| < 1/2 fails for kappa = {kappa}, s = {s}")]
    Solvability { kappa: f64, s: f64 },

    #[error("grid too coarse: spacing {spacing} exceeds {limit}")]
    GridTooCoarse { spacing: f64, limit: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
