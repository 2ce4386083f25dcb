use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = HoktError> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Each variant maps onto a short, stable code (see [`HoktError::code`]) that
/// the command line tool prints on failure.
#[derive(Debug, Error)]
pub enum HoktError {
    #[error("{0}")]
    Input(String),

    #[error("{0}")]
    Config(String),

    #[error("{0}")]
    UndefinedMetric(String),

    #[error("{0}")]
    Generation(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Internal(String),

    #[error("algorithm {algorithm}, run {}, timestep {timestep}: {source}", run.map_or("-".to_string(), |r| r.to_string()))]
    Experiment {
        algorithm: String,
        run: Option<usize>,
        timestep: usize,
        #[source]
        source: Box<HoktError>,
    },
}

impl HoktError {
    pub fn input(msg: impl Into<String>) -> Self {
        HoktError::Input(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        HoktError::Config(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        HoktError::Internal(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HoktError::Io {
            path: path.into(),
            source,
        }
    }

    /// Machine-readable code. Experiment errors report the code of their cause.
    pub fn code(&self) -> &'static str {
        match self {
            HoktError::Input(_) => "E_INPUT",
            HoktError::Config(_) => "E_CONFIG",
            HoktError::UndefinedMetric(_) => "E_UNDEFINED_METRIC",
            HoktError::Generation(_) => "E_GENERATION",
            HoktError::Io { .. } => "E_IO",
            HoktError::Internal(_) => "E_INTERNAL",
            HoktError::Experiment { source, .. } => source.code(),
        }
    }

    /// Attach (algorithm, timestep) context.
    pub fn at_step(self, algorithm: &str, timestep: usize) -> Self {
        HoktError::Experiment {
            algorithm: algorithm.to_string(),
            run: None,
            timestep,
            source: Box::new(self),
        }
    }

    /// Attach the run index to an error that already carries step context.
    pub fn with_run(self, run_index: usize) -> Self {
        match self {
            HoktError::Experiment {
                algorithm,
                timestep,
                source,
                ..
            } => HoktError::Experiment {
                algorithm,
                run: Some(run_index),
                timestep,
                source,
            },
            other => other,
        }
    }
}
