//! Crate-wide error type.

use std::fmt;

/// Errors shared by the simulation, fitting, and I/O layers.
#[derive(Debug)]
pub enum Error {
    /// Not enough observations to run an estimator.
    InsufficientData { needed: usize, got: usize },
    /// Fewer visible logo observations than the pipeline minimum.
    InsufficientVisibility { visible: usize, needed: usize },
    /// The stacked Magnus system is too ill-conditioned to solve
    /// (velocity direction nearly constant over the fit window).
    DegenerateGeometry { condition_number: f64 },
    /// All logo directions cluster around one point on the sphere,
    /// so no rotation plane can be identified.
    SpinAxisIndeterminate,
    /// Contour points average out to (nearly) the sphere center.
    DegenerateCentroid,
    /// An empty pixel contour was passed to the projection step.
    EmptyContour,
    /// The integrated flight never descends to the bounce plane
    /// within the simulated horizon.
    NoBounce,
    /// An estimator produced a spin outside the physical sanity bound.
    ImplausibleEstimate { magnitude: f64 },
    /// A design matrix lost rank (e.g. duplicate timestamps).
    RankDeficient,
    /// A value violated a documented precondition.
    InvalidParameter { name: &'static str, message: String },
    /// Malformed CSV input; `line` is 1-based.
    Csv { line: usize, message: String },
    /// Malformed config file; `line` is 1-based.
    Config { line: usize, message: String },
    Io(std::io::Error),
}

impl Error {
    pub fn invalid(name: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            message: message.into(),
        }
    }

    /// Short machine-readable tag, stable across releases. Used in the
    /// CLI's error JSON and matched by tests.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::InsufficientData { .. } => "insufficient-data",
            Error::InsufficientVisibility { .. } => "insufficient-visibility",
            Error::DegenerateGeometry { .. } => "degenerate-geometry",
            Error::SpinAxisIndeterminate => "spin-axis-indeterminate",
            Error::DegenerateCentroid => "degenerate-centroid",
            Error::EmptyContour => "empty-contour",
            Error::NoBounce => "no-bounce",
            Error::ImplausibleEstimate { .. } => "implausible-estimate",
            Error::RankDeficient => "rank-deficient",
            Error::InvalidParameter { .. } => "invalid-parameter",
            Error::Csv { .. } => "csv-error",
            Error::Config { .. } => "config-error",
            Error::Io(_) => "io-error",
        }
    }

    /// True for failures of an estimation pipeline as opposed to bad input
    /// files or parameters. The CLI maps these to exit code 2.
    pub fn is_estimation_error(&self) -> bool {
        matches!(
            self,
            Error::InsufficientData { .. }
                | Error::InsufficientVisibility { .. }
                | Error::DegenerateGeometry { .. }
                | Error::SpinAxisIndeterminate
                | Error::DegenerateCentroid
                | Error::EmptyContour
                | Error::NoBounce
                | Error::ImplausibleEstimate { .. }
                | Error::RankDeficient
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InsufficientData { needed, got } => {
                write!(f, "insufficient data: need {needed} observations, got {got}")
            }
            Error::InsufficientVisibility { visible, needed } => {
                write!(
                    f,
                    "insufficient visibility: {visible} visible logo observations, need {needed}"
                )
            }
            Error::DegenerateGeometry { condition_number } => {
                write!(
                    f,
                    "degenerate geometry: condition number {condition_number:.3e} \
                     (velocity direction nearly constant; spin component along the \
                     flight direction is unobservable)"
                )
            }
            Error::SpinAxisIndeterminate => {
                write!(f, "spin axis indeterminate: logo directions do not spread on the sphere")
            }
            Error::DegenerateCentroid => {
                write!(f, "contour centroid degenerate: mean direction has near-zero norm")
            }
            Error::EmptyContour => write!(f, "empty contour"),
            Error::NoBounce => write!(f, "no bounce within the integration horizon"),
            Error::ImplausibleEstimate { magnitude } => {
                write!(f, "implausible estimate: |omega| = {magnitude:.0} rad/s exceeds the sanity bound")
            }
            Error::RankDeficient => write!(f, "rank-deficient least-squares system"),
            Error::InvalidParameter { name, message } => {
                write!(f, "invalid parameter `{name}`: {message}")
            }
            Error::Csv { line, message } => write!(f, "csv error at line {line}: {message}"),
            Error::Config { line, message } => write!(f, "config error at line {line}: {message}"),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
