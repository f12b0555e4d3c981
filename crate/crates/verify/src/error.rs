use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid config: {}", .0.join("; "))]
    ConfigInvalid(Vec<String>),
    #[error("no polynomial met the constraints after {0} attempts")]
    Unsatisfiable(usize),
    #[error(transparent)]
    Core(#[from] charsums::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
