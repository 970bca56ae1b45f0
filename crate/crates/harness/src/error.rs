use std::path::PathBuf;

/// Failures of a CLI invocation. Exit codes: 1 for failed checks and
/// runtime errors, 2 for configuration errors, 3 for divergence.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),

    #[error("run diverged at t = {t}; partial trace in {}", dir.display())]
    Diverged { t: usize, dir: PathBuf },

    #[error("I/O error on {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Core(rso_core::Error),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Diverged { .. } => 3,
            HarnessError::Io { .. } | HarnessError::Core(_) => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| HarnessError::Io { path, source }
    }
}

impl From<rso_core::Error> for HarnessError {
    /// Invalid parameters are configuration problems; everything else is a
    /// runtime failure.
    fn from(e: rso_core::Error) -> Self {
        use rso_core::Error as E;
        match e {
            E::Config { .. } | E::Domain(_) | E::Construction(_) | E::InconsistentInfimum { .. } => {
                HarnessError::Config(e.to_string())
            }
            other => HarnessError::Core(other),
        }
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
