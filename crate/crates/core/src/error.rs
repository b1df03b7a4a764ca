use thiserror::Error;

/// Errors raised by grid construction, transforms and the derived operators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrlpError {
    #[error("sample count {0} is odd")]
    OddSampleCount(usize),
    #[error("sample count {0} is below the minimum of 8")]
    TooFewSamples(usize),
    #[error("grid extent must be positive and finite, got {0}")]
    NonPositiveExtent(f64),
    #[error("dimension {0} is not supported (expected 1 or 2)")]
    DimUnsupported(usize),
    #[error("angle {alpha} is singular: |sin(alpha)| = {sin_abs:e} <= 1e-12")]
    AngleSingular { alpha: f64, sin_abs: f64 },
    #[error(
        "chirp aliased: max instantaneous frequency {chirp_frequency} exceeds 0.9 x Nyquist {nyquist}"
    )]
    ChirpAliased { chirp_frequency: f64, nyquist: f64 },
    #[error("grids do not match")]
    GridMismatch,
    #[error("value length {got} does not match grid size {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
    #[error("symbol '{name}' is unbounded on the grid (max |m| = {max:e})")]
    SymbolUnbounded { name: String, max: f64 },
    #[error("symbol '{name}' leaks outside its annulus by {leak:e}")]
    SupportViolation { name: String, leak: f64 },
    #[error("level range [{j_min}, {j_max}] exceeds the grid Nyquist frequency {nyquist}")]
    RangeExceedsNyquist { j_min: i32, j_max: i32, nyquist: f64 },
    #[error("level {0} is outside the bank")]
    LevelOutOfRange(i32),
    #[error("dyadic scale {scale} does not align with {samples} samples")]
    ScaleMisaligned { scale: u32, samples: usize },
    #[error("riesz-type potential requires an explicit DC policy")]
    DcSingular,
    #[error("exponents violate 1/p - 1/q = s/n: residual {0:e}")]
    ExponentMismatch(f64),
    #[error("cube family is empty")]
    EmptyCubeFamily,
    #[error("kernel is not mean-zero on the grid (|mean| = {0:e})")]
    PsiNotMeanZero(f64),
    #[error("cube with {samples} samples cannot carry {moments} vanishing moments")]
    CubeTooSmall { samples: usize, moments: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("malformed signal file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, FrlpError>;

impl From<std::io::Error> for FrlpError {
    fn from(e: std::io::Error) -> Self {
        FrlpError::Io(e.to_string())
    }
}
