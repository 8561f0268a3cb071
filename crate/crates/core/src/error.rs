use thiserror::Error;

/// Errors raised by the engine.
///
/// Values are formatted into the message as `f64` so the type stays
/// independent of the scalar parameter.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("root at {re}{im:+}i has modulus {modulus} inside the ambiguity band around the unit circle")]
    BoundaryAmbiguous { re: f64, im: f64, modulus: f64 },
    #[error("function has a pole on the unit circle near {re}{im:+}i")]
    PoleOnCircle { re: f64, im: f64 },
    #[error("computed zero of modulus {modulus} escaped the open disk")]
    RootEscapedDisk { modulus: f64 },
    #[error("function is not in the Hardy space H2+")]
    NotInHardySpace,
    #[error("function is not in the model space")]
    NotInModelSpace,
    #[error("function is not in the Toeplitz kernel")]
    NotInKernel,
    #[error("function is not maximal: {reason}")]
    NotMaximal { reason: String },
    #[error("Frostman shift degenerate: |theta(0)| = {modulus}")]
    DegenerateShift { modulus: f64 },
    #[error("inner factor is constant; no maximal function vanishing at a point exists")]
    ConstantInnerFactor,
    #[error("insufficient degree: have {have}, need {need}")]
    InsufficientDegree { have: usize, need: usize },
    #[error("outer factor has a zero on the circle near {re}{im:+}i; representation not certified")]
    CarlesonViolation { re: f64, im: f64 },
    #[error("sup norm {sup} of the perturbation is not below 1")]
    NormTooLarge { sup: f64 },
    #[error("function is not inner: {reason}")]
    NotInner { reason: String },
    #[error("inner function does not divide: {reason}")]
    NotDividing { reason: String },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("eigenvalue iteration failed to converge")]
    NoConvergence,
    #[error("cross-check disagreement: {0}")]
    CrossCheckMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::BoundaryAmbiguous { .. } => "BoundaryAmbiguous",
            Error::PoleOnCircle { .. } => "PoleOnCircle",
            Error::RootEscapedDisk { .. } => "RootEscapedDisk",
            Error::NotInHardySpace => "NotInHardySpace",
            Error::NotInModelSpace => "NotInModelSpace",
            Error::NotInKernel => "NotInKernel",
            Error::NotMaximal { .. } => "NotMaximal",
            Error::DegenerateShift { .. } => "DegenerateShift",
            Error::ConstantInnerFactor => "ConstantInnerFactor",
            Error::InsufficientDegree { .. } => "InsufficientDegree",
            Error::CarlesonViolation { .. } => "CarlesonViolation",
            Error::NormTooLarge { .. } => "NormTooLarge",
            Error::NotInner { .. } => "NotInner",
            Error::NotDividing { .. } => "NotDividing",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NoConvergence => "NoConvergence",
            Error::CrossCheckMismatch(_) => "CrossCheckMismatch",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }

    /// True for failures caused by floating-point ambiguity rather than a
    /// mathematical verdict.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::BoundaryAmbiguous { .. }
                | Error::RootEscapedDisk { .. }
                | Error::NoConvergence
                | Error::CrossCheckMismatch(_)
        )
    }

    /// True for certified negative answers (the input fails a checked
    /// mathematical condition).
    pub fn is_rejection(&self) -> bool {
        matches!(
            self,
            Error::NotInHardySpace
                | Error::NotInModelSpace
                | Error::NotInKernel
                | Error::NotMaximal { .. }
                | Error::ConstantInnerFactor
                | Error::InsufficientDegree { .. }
                | Error::CarlesonViolation { .. }
                | Error::NormTooLarge { .. }
                | Error::NotInner { .. }
                | Error::NotDividing { .. }
                | Error::PoleOnCircle { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn at<T: num_traits::ToPrimitive>(z: num_complex::Complex<T>) -> (f64, f64) {
    (z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))
}
