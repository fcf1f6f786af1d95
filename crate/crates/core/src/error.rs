use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("polygon is not star-shaped: kernel radius {radius:e} with diameter {diameter:e}")]
    NotStarShaped { radius: f64, diameter: f64 },

    #[error("fan triangle {index} is degenerate (area {area:e})")]
    DegenerateTriangle { index: usize, area: f64 },

    #[error("unsupported order {0}")]
    UnsupportedOrder(usize),

    #[error("Gram matrix is rank deficient: pivot {pivot:e} against scale {scale:e}")]
    RankDeficient { pivot: f64, scale: f64 },

    #[error("point ({x}, {y}) lies outside the element")]
    PointOutsideElement { x: f64, y: f64 },

    #[error("edge lattice mismatch between cells {first} and {second}: distance {distance:e}")]
    EdgeMismatch {
        first: usize,
        second: usize,
        distance: f64,
    },

    #[error("solver breakdown: {0}")]
    SolverBreakdown(String),

    #[error("solver did not converge: relative residual {residual:e}")]
    NonConvergence { residual: f64 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid geometry: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::Validation(vec![message.into()])
    }
}
