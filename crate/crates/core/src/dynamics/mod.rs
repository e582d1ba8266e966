//! Time evolution: geodesics in Lagrangian variables, the Eulerian PDEs,
//! the explicit HS geodesic and Jacobi fields.

mod eulerian;
mod explicit;
mod jacobi;
mod lagrangian;
mod shifted;

pub use eulerian::{eulerian_rhs, eulerian_step, cfl_bound, EulerianState};
pub use explicit::{
    explicit_hs_geodesic, explicit_hs_velocity, hs_blowup_time, hs_normalization, slope_identity_residual,
};
pub use jacobi::{jacobi_step, JacobiState};
pub use lagrangian::{
    geodesic_energy, geodesic_step, lagrangian_eulerian_check, lagrangian_eulerian_gap, locate_chart_exit,
    ChartExit, CoupledRun, GeodesicState, ADAPT_SLOPE, CHART_EXIT_SLOPE, DEFAULT_DT,
};
pub use shifted::shifted_solution_check;
