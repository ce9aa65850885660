use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("quaternion is zero")]
    ZeroQuaternion,
    #[error("chart mismatch: {0} vs {1} complex dimensions")]
    ChartMismatch(usize, usize),
    #[error("degree {degree} exceeds the chart's real dimension {max}")]
    DegreeTooHigh { degree: usize, max: usize },
    #[error("type ({p},{q}) does not match form degree {degree}")]
    TypeMismatch { p: usize, q: usize, degree: usize },
    #[error("singular evaluation: {0}")]
    SingularEvaluation(String),
    #[error("metric is not positive definite at the evaluation point")]
    DegenerateMetric,
    #[error("metric does not have unit determinant (det = {0:.3e}); j is not a quaternionic structure")]
    NotQuaternionic(f64),
    #[error("frame mismatch between connections")]
    FrameMismatch,
    #[error("quadrature did not converge: error estimate {estimate:.3e} above tolerance {tolerance:.3e}")]
    NonConvergent { estimate: f64, tolerance: f64 },
    #[error("ill-conditioned extrapolation fit")]
    IllConditioned,
    #[error("radius schedule too short: need at least {needed}, got {got}")]
    ScheduleTooShort { needed: usize, got: usize },
    #[error("radius schedule must be strictly decreasing and positive")]
    BadSchedule,
    #[error("test form has the wrong type: {0}")]
    WrongTestFormType(String),
    #[error("not Abel-Jacobi equivalent: (0,1) mean {0:.3e} does not vanish")]
    NotAbelJacobiEquivalent(f64),
    #[error("normalization class mismatch: period {0} is not in 2πi·ℤ")]
    NormalizationClassMismatch(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
