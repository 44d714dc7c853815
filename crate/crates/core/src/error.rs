use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Input text was not well-formed JSON.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// A value violated a data-model or configuration constraint. `field`
    /// names the offending field, id or parameter.
    #[error("validation error ({field}): {message}")]
    Validation { field: String, message: String },

    /// An LLM response did not honor its JSON contract.
    #[error("contract error: {message}")]
    Contract { message: String, raw: String },

    /// A prompt template slot had no value.
    #[error("placeholder: {0}")]
    MissingPlaceholder(String),

    /// Two structures that must describe the same records disagree.
    #[error("consistency error: {0}")]
    Consistency(String),
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Name of the offending field for validation errors.
    pub fn field(&self) -> Option<&str> {
        match self {
            Error::Validation { field, .. } => Some(field),
            _ => None,
        }
    }
}
