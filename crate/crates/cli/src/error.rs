use dgla_core::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },

    #[error("{location}: {message}")]
    Input { location: String, message: String },

    #[error("{location}: {source}")]
    Invariant { location: String, source: Error },

    #[error("{0}")]
    Core(#[from] Error),
}

impl CliError {
    pub fn input(location: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Input {
            location: location.into(),
            message: message.into(),
        }
    }

    pub fn invariant(location: impl Into<String>, source: Error) -> Self {
        CliError::Invariant {
            location: location.into(),
            source,
        }
    }

    /// 1 usage or parse, 2 invariant violation, 3 criterion fails, 4 no convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Input { .. } => 1,
            CliError::Invariant { source, .. } => match source {
                Error::Parse(_) | Error::Shape(_) => 1,
                _ => 2,
            },
            CliError::Core(e) => match e {
                Error::CriterionFails { .. } => 3,
                Error::NoConvergence { .. } => 4,
                Error::NotAntisymmetric { .. }
                | Error::NotLie { .. }
                | Error::NotAssociative { .. }
                | Error::InvalidUnit { .. }
                | Error::NotMorphism { .. }
                | Error::NotLieSubalgebra { .. }
                | Error::ImageNotContained { .. }
                | Error::DegenerateForm
                | Error::WrongSymmetry => 2,
                _ => 1,
            },
        }
    }

    /// Basis indices of the failing triple or pair, when there is one.
    pub fn triple(&self) -> Option<Vec<usize>> {
        let e = match self {
            CliError::Invariant { source, .. } | CliError::Core(source) => source,
            _ => return None,
        };
        match *e {
            Error::NotAntisymmetric { i, j, k }
            | Error::NotLie { i, j, k }
            | Error::NotAssociative { i, j, k } => Some(vec![i, j, k]),
            Error::NotMorphism { i, j } | Error::NotLieSubalgebra { i, j } => Some(vec![i, j]),
            Error::InvalidUnit { index } | Error::ImageNotContained { index } => Some(vec![index]),
            _ => None,
        }
    }
}
