//! Harness-level errors with scenario context.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// Config validation failed; every violated field is listed.
    #[error("configuration invalid:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),

    /// A simulation step failed inside a named scenario.
    #[error("scenario {scenario}: {source}")]
    Simulation {
        scenario: String,
        #[source]
        source: roadlink_core::Error,
    },

    #[error("no bundled scenario named {0:?} (see `roadlink list`)")]
    UnknownScenario(String),

    #[error("failed to parse config: {0}")]
    Parse(#[from] toml::de::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, HarnessError>;

impl HarnessError {
    /// Machine-readable one-line summary for the CLI's stderr.
    pub fn to_json(&self) -> String {
        let kind = match self {
            HarnessError::Validation(_) => "validation",
            HarnessError::Simulation { .. } => "simulation",
            HarnessError::UnknownScenario(_) => "unknown_scenario",
            HarnessError::Parse(_) => "parse",
            HarnessError::Io(_) => "io",
        };
        serde_json::json!({ "error": kind, "detail": self.to_string() }).to_string()
    }
}
