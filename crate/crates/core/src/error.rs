use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("zero quaternion has no inverse")]
    ZeroDivisor,

    #[error("axis {0:?} is not a pure unit quaternion")]
    InvalidAxis([f64; 4]),

    #[error("invalid grid geometry: {0}")]
    InvalidGeometry(String),

    #[error("grid geometries differ: {0}")]
    GeometryMismatch(String),

    #[error("empty signal")]
    EmptySignal,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parameters (a={a}, b={b}, c={c}, d={d}) are not unimodular: ad - bc = {det}")]
    NotUnimodular { a: f64, b: f64, c: f64, d: f64, det: f64 },

    #[error("operation requires b != 0 on axis {axis}; use the degenerate branch")]
    DegenerateBranch { axis: usize },

    #[error("fast path supports only left axis i and right axis j; use qft_forward")]
    UnsupportedAxes,

    #[error("frequency grid is not commensurate with an FFT of the time grid on axis {axis}: {detail}")]
    IncommensurateGrid { axis: usize, detail: String },

    #[error("size guard: {what} has {size} samples per axis, limit is {limit}")]
    SizeGuard { what: &'static str, size: usize, limit: usize },

    #[error("window signal has zero energy")]
    ZeroWindow,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported image: {0}")]
    Image(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
