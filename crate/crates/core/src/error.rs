use thiserror::Error;

/// Everything that can go wrong between the input parameters and the
/// reconstructed fields.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("spectrum lengths inconsistent with model class: {0}")]
    ClassMismatch(String),
    #[error("viscosity must be positive, got {0}")]
    NonpositiveViscosity(f64),
    #[error("relaxation/retardation times must be nonnegative, got {0}")]
    NegativeTime(f64),
    #[error("angular frequency must be positive and finite, got {0}")]
    InvalidFrequency(f64),
    #[error("invalid parameter `{name}`: {reason}")]
    BadParameter { name: String, reason: String },
    #[error("profile is not positive: g({x}) = {value}")]
    PositivityViolation { x: f64, value: f64 },
    #[error("profile does not approach the homogeneous state: residual {residual:e} at x = {x}")]
    AsymptoticsViolated { x: f64, residual: f64 },
    #[error("malformed profile table at line {line}: {reason}")]
    Table { line: usize, reason: String },
    #[error("coefficient G nearly vanishes at x = {x} (|G| = {modulus:e})")]
    GVanishes { x: f64, modulus: f64 },
    #[error("limit of G is zero; no wavenumber exists")]
    DegenerateG,
    #[error("potential is not integrable: {0}")]
    NotIntegrable(String),
    #[error("Neumann iterate left the representable range at term {term}")]
    OverflowRisk { term: usize },
    #[error("Neumann series did not converge: {0}")]
    NoConvergence(String),
    #[error("series remainder bound {bound:e} exceeds tolerance {tol:e}")]
    TruncationTooShort { bound: f64, tol: f64 },
    #[error("Jost function vanishes at the origin (|f(0)| = {0:e})")]
    JostZeroAtOrigin(f64),
    #[error("pressure bracket vanishes at the inlet")]
    DegenerateBracket,
    #[error("slope F'(0) vanishes; the inlet pressure cannot be matched")]
    DegenerateSlope,
    #[error("governing-system residual {residual:e} in {equation} exceeds {tol:e}")]
    ResidualTooLarge {
        equation: &'static str,
        residual: f64,
        tol: f64,
    },
    #[error("step size collapsed at x = {x} while integrating the oracle ODE")]
    StiffnessFailure { x: f64 },
    #[error("|q(x_max)| = {0:e} is too large to match the far-field asymptotics")]
    BadTruncation(f64),
}

impl Error {
    pub fn bad_parameter(name: &str, reason: impl Into<String>) -> Self {
        Error::BadParameter {
            name: name.to_string(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by invalid input rather than by the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::ClassMismatch(_)
                | Error::NonpositiveViscosity(_)
                | Error::NegativeTime(_)
                | Error::InvalidFrequency(_)
                | Error::BadParameter { .. }
                | Error::PositivityViolation { .. }
                | Error::Table { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
