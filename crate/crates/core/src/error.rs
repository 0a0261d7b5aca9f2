use thiserror::Error;

/// Errors raised by the curve engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    /// Two consecutive nodes coincide (mesh collapse).
    #[error("degenerate segment {segment}{}", curve_suffix(*.curve))]
    DegenerateSegment { curve: Option<usize>, segment: usize },

    /// Unregularized Biot-Savart kernel evaluated on (or too close to) its source curve.
    #[error(
        "singular Biot-Savart evaluation at distance {distance:e}{}",
        pair_suffix(*.target_curve, *.source_curve, *.node)
    )]
    SingularEvaluation {
        distance: f64,
        target_curve: Option<usize>,
        source_curve: Option<usize>,
        node: Option<usize>,
    },

    #[error("curves too close for linking quadrature: distance {distance:e}")]
    CurvesTooClose { distance: f64 },

    #[error("non-finite derivative at coordinate {index}")]
    NonFiniteDerivative { index: usize },

    #[error(
        "step size underflow at t = {t}: dt = {dt:e}{}",
        .max_curvature.map(|k| format!(", max curvature {k:e}")).unwrap_or_default()
    )]
    StepSizeUnderflow {
        t: f64,
        dt: f64,
        max_curvature: Option<f64>,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("config error{}: {message} (key `{key}`)", .line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Config {
        line: Option<usize>,
        key: String,
        message: String,
    },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
}

fn curve_suffix(curve: Option<usize>) -> String {
    curve.map(|c| format!(" on curve {c}")).unwrap_or_default()
}

fn pair_suffix(target: Option<usize>, source: Option<usize>, node: Option<usize>) -> String {
    let mut s = String::new();
    if let (Some(t), Some(src)) = (target, source) {
        s.push_str(&format!(" (target curve {t}, source curve {src}"));
        if let Some(k) = node {
            s.push_str(&format!(", node {k}"));
        }
        s.push(')');
    }
    s
}

impl Error {
    /// True for failures of the numerics (blow-up, collapse, singular kernel)
    /// as opposed to bad user input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::DegenerateSegment { .. }
                | Error::SingularEvaluation { .. }
                | Error::CurvesTooClose { .. }
                | Error::NonFiniteDerivative { .. }
                | Error::StepSizeUnderflow { .. }
        )
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, err: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            message: err.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
