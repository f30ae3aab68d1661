use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),
    #[error("topology error: {0}")]
    Topology(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("degenerate dual cell: {0}")]
    DegenerateDual(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("geodesic solver failed: {0}")]
    Solver(String),
    #[error("chart error: {0}")]
    Chart(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short stable identifier for machine-readable error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidSimplex(_) => "invalid_simplex",
            Error::Topology(_) => "topology",
            Error::NotFound(_) => "not_found",
            Error::DegenerateDual(_) => "degenerate_dual",
            Error::Domain(_) => "domain",
            Error::Solver(_) => "solver",
            Error::Chart(_) => "chart",
            Error::Invalid(_) => "invalid_input",
            Error::Json(_) => "json",
            Error::Io(_) => "io",
        }
    }

    /// True for failures that arise while evaluating geometry rather than from malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::InvalidSimplex(_)
                | Error::DegenerateDual(_)
                | Error::Domain(_)
                | Error::Solver(_)
                | Error::Chart(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
