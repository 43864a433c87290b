use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sample interval must be finite and positive, got {0}")]
    InvalidSampleInterval(f64),

    #[error("waveform too short: need at least {required} samples, got {actual}")]
    TooShort { required: usize, actual: usize },

    #[error("{0} cannot be synthesized by this operation")]
    UnsupportedModel(&'static str),

    #[error("frequency {frequency} Hz is at or above the Nyquist frequency {nyquist} Hz")]
    AboveNyquist { frequency: f64, nyquist: f64 },

    #[error("delay {delay} s is out of range (|delay| must be below {limit} s)")]
    DelayOutOfRange { delay: f64, limit: f64 },

    #[error("no usable zero crossings")]
    NoCrossings,

    #[error("no {0} crossings in the usable region")]
    EmptyClass(&'static str),

    #[error("half window {half_window} s exceeds a quarter of the record ({limit} s)")]
    WindowTooLarge { half_window: f64, limit: f64 },

    #[error(
        "band ({low}, {high}) rad/s has ratio {ratio:.4}, above the zero-crossing \
         degrees-of-freedom limit (7+sqrt(33))/4 = 3.1861"
    )]
    BandRatio { low: f64, high: f64, ratio: f64 },

    #[error("crossing event lies in an untrusted edge zone (sample {0})")]
    UntrustedEvent(usize),

    #[error("lag grids do not match")]
    GridMismatch,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
