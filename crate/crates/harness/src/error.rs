use std::fmt;

/// Failures of a harness command. `Usage` maps to exit code 2, `Run` to 1.
#[derive(Debug)]
pub enum HarnessError {
    Usage(String),
    Run(String),
}

impl HarnessError {
    pub fn parse(line: usize, msg: impl fmt::Display) -> Self {
        HarnessError::Usage(format!("line {line}: {msg}"))
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Usage(_) => 2,
            HarnessError::Run(_) => 1,
        }
    }
}

impl fmt::Display for HarnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HarnessError::Usage(m) | HarnessError::Run(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for HarnessError {}

/// Input problems are usage errors; anything else raised while computing is a run failure.
impl From<ncfourier::Error> for HarnessError {
    fn from(e: ncfourier::Error) -> Self {
        match e {
            ncfourier::Error::Parse { .. } | ncfourier::Error::Structural(_) => HarnessError::Usage(e.to_string()),
            _ => HarnessError::Run(e.to_string()),
        }
    }
}
