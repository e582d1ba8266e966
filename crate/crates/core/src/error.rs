use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid size {0} is not a power of two >= 16")]
    InvalidGridSize(usize),

    #[error("field contains a non-finite sample at index {0}")]
    NonFinite(usize),

    #[error("grid sizes differ ({0} vs {1})")]
    GridMismatch(usize, usize),

    #[error("input to the -d^2/dx^2 inverse has mean {mean:e} (tolerance {tol:e})")]
    NonZeroMean { mean: f64, tol: f64 },

    #[error("diffeomorphism lost orientation: min slope {min_slope:e} <= {floor:e}")]
    OrientationLost { min_slope: f64, floor: f64 },

    #[error("base point not fixed: phi(0) - 0 = {0:e}")]
    BasePointMoved(f64),

    #[error("Newton inversion failed to converge at x = {x} (residual {residual:e})")]
    NewtonDivergence { x: f64, residual: f64 },

    #[error("first component is {value:e} at x = 0 but the chart requires 0")]
    ChartViolation { value: f64 },

    #[error("directions span a degenerate plane (gram determinant {gram_det:e} <= {floor:e})")]
    DegenerateSpan { gram_det: f64, floor: f64 },

    #[error("initial velocity has 1/4 int u0x^2 = {value}, expected 1")]
    NormalizationError { value: f64 },

    #[error("t = {t} is past the maximal existence time {t_star}")]
    BlowupReached { t: f64, t_star: f64 },

    #[error("dt = {dt:e} exceeds the advective bound {bound:e}")]
    CflViolation { dt: f64, bound: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
