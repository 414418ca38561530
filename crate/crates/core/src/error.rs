use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("duplicate medium name `{0}`")]
    DuplicateMedium(String),

    #[error("unknown medium `{0}`")]
    UnknownMedium(String),

    #[error("separation lies on the sound cone; the correlator is singular there")]
    SoundConeSingularity,

    #[error("thermal comparison undefined at zero temperature")]
    ZeroTemperature,

    #[error("geometry is not image-admissible: {0}")]
    NotImageAdmissible(String),

    #[error("tolerance {requested:e} unreachable (best estimate {estimate:e} +/- {abs_error:e})")]
    ToleranceUnreachable {
        requested: f64,
        estimate: f64,
        abs_error: f64,
    },

    #[error("no incoming angle admits a reflected ray pair through the field point")]
    EmptyAdmissibleSet,

    #[error("fit rejected: {0}")]
    PoorFit(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad input or configuration rather than by
    /// a numerical procedure failing to converge.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::Config(_)
                | Error::DuplicateMedium(_)
                | Error::UnknownMedium(_)
                | Error::NotImageAdmissible(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
