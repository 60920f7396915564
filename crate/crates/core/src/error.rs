use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("element with zero standard part is not invertible")]
    NotInvertible,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("impure infinitesimal: coefficient {subset:?} = {value:e} exceeds tolerance {tol:e}")]
    ImpureInfinitesimal { subset: Vec<usize>, value: f64, tol: f64 },

    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown primitive `{name}` at offset {offset}")]
    UnknownPrimitive { name: String, offset: usize },

    #[error("exponent at offset {offset} must be a real literal")]
    NonLiteralExponent { offset: usize },

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("did not converge: {0}")]
    NonConvergence(String),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("degenerate constraint: gradient of the constraint vanishes")]
    DegenerateConstraint,

    #[error("degenerate parametrization: {0}")]
    DegenerateParametrization(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Parse or usage errors, as opposed to numerical ones.
    pub fn is_parse_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::UnknownPrimitive { .. }
                | Error::NonLiteralExponent { .. }
                | Error::UnboundVariable(_)
                | Error::InvalidArgument(_)
        )
    }

    /// Domain-class failures: evaluating outside a primitive's domain, or dividing by
    /// a non-invertible element.
    pub fn is_domain_error(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::NotInvertible
                | Error::Dimension(_)
                | Error::DegenerateConstraint
                | Error::DegenerateParametrization(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
