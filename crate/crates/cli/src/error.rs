use std::fmt;

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Exit {
    Positive = 0,
    Refuted = 1,
    Input = 2,
    Limit = 3,
}

#[derive(Debug)]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { exit: Exit::Input, message: message.into() }
    }

    pub fn json(e: serde_json::Error) -> Self {
        CliError::input(format!("invalid JSON: {e}"))
    }

    pub fn context(self, what: &str) -> Self {
        CliError { message: format!("{what}: {}", self.message), ..self }
    }
}

impl From<spherecover::Error> for CliError {
    fn from(e: spherecover::Error) -> Self {
        use spherecover::Error::*;
        let exit = match e {
            IterationLimit | RetryLimit | RejectionLimit(_) | SelectionExplosion { .. } | FaceEnumerationLimit { .. } => {
                Exit::Limit
            }
            _ => Exit::Input,
        };
        CliError { exit, message: e.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}
