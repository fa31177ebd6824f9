use std::path::PathBuf;

/// Errors raised by grid construction, discretization and the drivers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid grid request: {0}")]
    InvalidGrid(String),

    #[error("degenerate element {element}: signed area {area:e}")]
    DegenerateElement { element: usize, area: f64 },

    #[error("least-squares stencil at node {node} is rank deficient ({kind})")]
    RankDeficient { node: usize, kind: &'static str },

    #[error("nonphysical state (rho={rho:e}, p={p:e})")]
    Nonphysical { rho: f64, p: f64 },

    #[error("nonphysical reconstructed state on edge {edge}: rho={rho:e}, p={p:e}")]
    NonphysicalEdge { edge: usize, rho: f64, p: f64 },

    #[error("vacuum Roe average")]
    VacuumRoeAverage,

    #[error("nonpositive temperature {0:e} in vortex solution")]
    NonpositiveTemperature(f64),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("iteration did not converge: {0}")]
    NotConverged(String),

    #[error("solution diverged: {0}")]
    Diverged(String),

    #[error("mesh file parse error at line {line}: {msg}")]
    MeshParse { line: usize, msg: String },

    #[error("grid n={n}: {source}")]
    GridRun {
        n: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
