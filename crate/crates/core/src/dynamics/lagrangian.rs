use serde::{Deserialize, Serialize};

use super::eulerian::{eulerian_step, EulerianState};
use crate::christoffel::{check_chart, christoffel_pullback, metric, EquationKind, MetricConvention};
use crate::error::{Error, Result};
use crate::field::PeriodicField;
use crate::group::{CircleDiffeo, GroupElement, TangentPair};

/// Default time step.
pub const DEFAULT_DT: f64 = 1e-3;
/// The step is halved each time `min φₓ` drops below `ADAPT_SLOPE / 4^j`.
pub const ADAPT_SLOPE: f64 = 0.05;
/// `min φₓ` below which the geodesic is treated as leaving the chart.
pub const CHART_EXIT_SLOPE: f64 = 1e-3;
/// Lowest `min φₓ` the exit refinement steps into.
const EXIT_REFINE_FLOOR: f64 = 4e-5;
const EXIT_REFINE_TAU: f64 = 1e-9;
const CHART_DRIFT_TOL: f64 = 1e-12;

/// Point on a geodesic: base `(φ, f)`, Lagrangian velocity `(φ_t, f_t)` and time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicState {
    pub base: GroupElement,
    pub velocity: TangentPair,
    pub t: f64,
    pub kind: EquationKind,
}

impl GeodesicState {
    /// One-component equations drop the second components. Chart-constrained
    /// equations require `φ(0) = 0` and `φ_t(0) = 0`.
    pub fn new(kind: EquationKind, base: GroupElement, velocity: TangentPair, t: f64) -> Result<Self> {
        if base.n() != velocity.n() {
            return Err(Error::GridMismatch(base.n(), velocity.n()));
        }
        if kind.chart_constrained() {
            base.phi.require_base_point_fixed()?;
            check_chart(kind, &velocity)?;
        }
        let (base, velocity) = if kind.is_two_component() {
            (base, velocity)
        } else {
            let n = base.n();
            (
                GroupElement::new(base.phi, PeriodicField::zeros(n)?)?,
                TangentPair::first_only(velocity.first),
            )
        };
        Ok(Self { base, velocity, t, kind })
    }

    /// Geodesic through the identity with initial velocity `u0`.
    pub fn from_identity(kind: EquationKind, u0: TangentPair) -> Result<Self> {
        let e = GroupElement::identity(u0.n())?;
        Self::new(kind, e, u0, 0.0)
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    /// Eulerian velocity `(φ_t∘φ⁻¹, f_t∘φ⁻¹)`.
    pub fn eulerian_velocity(&self) -> Result<TangentPair> {
        Ok(self.velocity.compose(&self.base.phi.inverse()?))
    }
}

/// `(v, f, V₁, V₂)` with `φ = id + v`.
#[derive(Clone)]
struct Phase {
    v: PeriodicField,
    f: PeriodicField,
    w1: PeriodicField,
    w2: PeriodicField,
}

impl Phase {
    fn of(s: &GeodesicState) -> Self {
        Self {
            v: s.base.phi.displacement().clone(),
            f: s.base.f.clone(),
            w1: s.velocity.first.clone(),
            w2: s.velocity.second.clone(),
        }
    }

    fn axpy(&self, a: f64, k: &Phase) -> Phase {
        Phase {
            v: self.v.axpy(a, &k.v),
            f: self.f.axpy(a, &k.f),
            w1: self.w1.axpy(a, &k.w1),
            w2: self.w2.axpy(a, &k.w2),
        }
    }

    fn rate(&self, kind: EquationKind) -> Result<Phase> {
        let base = GroupElement::new(CircleDiffeo::new(self.v.clone())?, self.f.clone())?;
        let vel = TangentPair { first: self.w1.clone(), second: self.w2.clone() };
        let acc = christoffel_pullback(kind, &base, &vel, &vel)?;
        Ok(Phase { v: vel.first, f: vel.second, w1: acc.first, w2: acc.second })
    }
}

fn project_to_chart(field: &PeriodicField) -> Result<PeriodicField> {
    let value = field.value_at_zero();
    if value.abs() > CHART_DRIFT_TOL * (1.0 + field.sup_norm()) {
        return Err(Error::ChartViolation { value });
    }
    Ok(field.offset(-value))
}

/// One classical RK4 step of `(φ, f)_tt = Γ_(φ,f)((φ, f)_t, (φ, f)_t)`.
pub fn geodesic_step(s: &GeodesicState, dt: f64) -> Result<GeodesicState> {
    if dt.is_nan() || dt <= 0.0 {
        return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
    }
    let kind = s.kind;
    let y = Phase::of(s);
    let k1 = y.rate(kind)?;
    let k2 = y.axpy(0.5 * dt, &k1).rate(kind)?;
    let k3 = y.axpy(0.5 * dt, &k2).rate(kind)?;
    let k4 = y.axpy(dt, &k3).rate(kind)?;
    let mut next = y
        .axpy(dt / 6.0, &k1)
        .axpy(dt / 3.0, &k2)
        .axpy(dt / 3.0, &k3)
        .axpy(dt / 6.0, &k4);
    if kind.chart_constrained() {
        next.v = project_to_chart(&next.v)?;
        next.w1 = project_to_chart(&next.w1)?;
    }
    Ok(GeodesicState {
        base: GroupElement::new(CircleDiffeo::new(next.v)?, next.f)?,
        velocity: TangentPair { first: next.w1, second: next.w2 },
        t: s.t + dt,
        kind,
    })
}

/// Kinetic energy `⟨(φ,f)_t, (φ,f)_t⟩` in the right-invariant metric.
pub fn geodesic_energy(g: &GeodesicState, conv: MetricConvention) -> f64 {
    metric(g.kind, conv, &g.base, &g.velocity, &g.velocity)
}

/// Step size for the current slope: `dt / 2^j` with `j` the number of
/// thresholds `ADAPT_SLOPE / 4^i` that `min_slope` has crossed.
fn adapted_dt(dt: f64, min_slope: f64) -> f64 {
    let mut h = dt;
    let mut level = ADAPT_SLOPE;
    while min_slope < level && h > dt * 1e-6 {
        h *= 0.5;
        level *= 0.25;
    }
    h
}

/// Steps with the adapted dt, halving further whenever a stage loses orientation.
fn adaptive_step(s: &GeodesicState, dt: f64) -> Result<GeodesicState> {
    let mut h = adapted_dt(dt, s.base.phi.min_slope());
    loop {
        match geodesic_step(s, h) {
            Err(Error::OrientationLost { .. }) if h > dt * 1e-6 => h *= 0.5,
            other => return other,
        }
    }
}

fn advance(mut s: GeodesicState, span: f64, dt: f64) -> Result<GeodesicState> {
    let h = adapted_dt(dt, s.base.phi.min_slope());
    let steps = (span / h).ceil().max(1.0) as usize;
    let h = span / steps as f64;
    for _ in 0..steps {
        s = geodesic_step(&s, h)?;
    }
    Ok(s)
}

/// Where and when a geodesic leaves the chart (`min φₓ → 0`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartExit {
    /// First step time at which `min φₓ < CHART_EXIT_SLOPE`.
    pub t_threshold: f64,
    /// Extrapolated time at which `min φₓ` reaches zero.
    pub t_exit: f64,
    /// Location of the minimum slope at the last refinement.
    pub x_exit: f64,
    pub steps: usize,
}

/// Integrates with adaptive steps until `min φₓ < CHART_EXIT_SLOPE`, then
/// extrapolates the zero of `√(min φₓ)` by Newton steps, advancing the
/// geodesic half of each predicted interval.
///
/// `φₓ` vanishes quadratically at the exit, so its square root vanishes
/// linearly and the Newton prediction `2 m / |∂ₜφₓ|` is accurate to
/// second order in the remaining time.
pub fn locate_chart_exit(start: GeodesicState, dt: f64, t_max: f64) -> Result<ChartExit> {
    let mut s = start;
    let mut steps = 0usize;
    while s.base.phi.min_slope() >= CHART_EXIT_SLOPE {
        if s.t >= t_max {
            return Err(Error::InvalidArgument(format!("no chart exit before t = {t_max}")));
        }
        s = adaptive_step(&s, dt)?;
        steps += 1;
    }
    let t_threshold = s.t;
    loop {
        let (x, m) = s.base.phi.slope().min_refined();
        let rate = s.velocity.first.interpolant().eval_derivative(x, 1);
        if rate >= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "minimum slope {m:e} at x = {x} is not decreasing"
            )));
        }
        let tau = 2.0 * m / -rate;
        if tau < EXIT_REFINE_TAU || m < EXIT_REFINE_FLOOR {
            return Ok(ChartExit { t_threshold, t_exit: s.t + tau, x_exit: x, steps });
        }
        s = advance(s, 0.5 * tau, dt)?;
        steps += 1;
    }
}

/// Sup-norm gap between the Eulerian velocity of `lag` and the state `eul`.
pub fn lagrangian_eulerian_gap(lag: &GeodesicState, eul: &EulerianState) -> Result<f64> {
    let u = lag.eulerian_velocity()?;
    Ok(u.first.max_abs_diff(&eul.u).max(u.second.max_abs_diff(&eul.rho)))
}

/// The Lagrangian and Eulerian descriptions of one flow, advanced together.
#[derive(Debug, Clone)]
pub struct CoupledRun {
    pub lagrangian: GeodesicState,
    pub eulerian: EulerianState,
    pub dealias: bool,
}

impl CoupledRun {
    pub fn new(kind: EquationKind, u0: TangentPair, dealias: bool) -> Result<Self> {
        let lagrangian = GeodesicState::from_identity(kind, u0)?;
        let eulerian = EulerianState::new(
            kind,
            lagrangian.velocity.first.clone(),
            lagrangian.velocity.second.clone(),
            0.0,
        )?;
        Ok(Self { lagrangian, eulerian, dealias })
    }

    pub fn step(&mut self, dt: f64) -> Result<()> {
        self.lagrangian = geodesic_step(&self.lagrangian, dt)?;
        self.eulerian = eulerian_step(&self.eulerian, dt, self.dealias)?;
        Ok(())
    }

    pub fn gap(&self) -> Result<f64> {
        lagrangian_eulerian_gap(&self.lagrangian, &self.eulerian)
    }
}

/// Evolves `u0` to `t_end` in both descriptions with step `dt` and returns their gap.
pub fn lagrangian_eulerian_check(kind: EquationKind, u0: &TangentPair, t_end: f64, dt: f64) -> Result<f64> {
    let mut run = CoupledRun::new(kind, u0.clone(), false)?;
    let steps = (t_end / dt).round() as usize;
    for _ in 0..steps {
        run.step(dt)?;
    }
    run.gap()
}
