use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid too small: nx={nx}, np={np} (need at least 8 samples per axis)")]
    GridTooSmall { nx: usize, np: usize },

    #[error("grid too large: {nodes} nodes exceeds the budget of {budget}")]
    GridTooLarge { nodes: usize, budget: usize },

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("non-finite sample at node {index}")]
    NonFinite { index: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("window too small: field magnitude {edge:e} at the window edge exceeds 1e-9")]
    WindowTooSmall { edge: f64 },

    #[error(
        "window too small for smoothing: field magnitude {edge:e} at the window edge exceeds 1e-9"
    )]
    WindowTooSmallForSmoothing { edge: f64 },

    #[error("deconvolution unsupported: cannot map order {from} to the sharper order {to}")]
    DeconvolutionUnsupported { from: f64, to: f64 },

    #[error("no closed-form Husimi function for family `{0}`; smooth the Wigner field to order -1 instead")]
    NoClosedForm(&'static str),

    #[error("{0}")]
    WrongOrder(String),

    #[error(transparent)]
    Psgrid(#[from] PsgridError),
}

/// Failures reading or writing PSGRID files.
#[derive(Debug, Error)]
pub enum PsgridError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("line {line}: grid too small: nx={nx}, np={np}")]
    GridTooSmall { line: usize, nx: usize, np: usize },

    #[error("line {line}: expected nx·np = {expected} values, found {found}")]
    DimensionMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}: expected {expected} values in this row, found {found}")]
    RowLength {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}: non-finite value `{token}`")]
    NonFinite { line: usize, token: String },

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}
