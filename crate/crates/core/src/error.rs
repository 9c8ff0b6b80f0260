use thiserror::Error;

/// Errors raised by the library. Certificate violations are kept separate
/// from input errors so the CLI can map them to distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite coordinate in {0}")]
    NonFinite(&'static str),

    #[error("degenerate tangent plane at parameter node (u = {u}, v = {v})")]
    DegenerateTangent { u: f64, v: f64 },

    #[error("curve is not horizontal: max |theta(c')|/|c'| = {max_violation:.3e}")]
    NotHorizontal { max_violation: f64 },

    #[error("degenerate curve velocity at t = {t}")]
    DegenerateVelocity { t: f64 },

    #[error(
        "candidate family `{family}` cannot reach volume {target}: reachable bound is {bound}"
    )]
    Unreachable {
        family: &'static str,
        target: f64,
        bound: f64,
    },

    #[error("budget violation ({inequality}): {detail}")]
    Budget {
        inequality: &'static str,
        detail: String,
    },

    #[error("certificate violation in {step}: slack {slack:.6e} below -{tol:.3e}")]
    CertificateViolation { step: String, slack: f64, tol: f64 },

    #[error("wrong ambient: expected {expected}, found {found}")]
    WrongAmbient {
        expected: &'static str,
        found: String,
    },

    #[error("malformed domain file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be a finite positive number, got {value}"),
        })
    }
}
