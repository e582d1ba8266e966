use serde::{Deserialize, Serialize};

use crate::christoffel::{check_chart, EquationKind};
use crate::error::{Error, Result};
use crate::field::{InertiaOperatorKind, PeriodicField};
use crate::group::TangentPair;

/// Velocity and density on the grid. One-component equations keep `rho = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EulerianState {
    pub u: PeriodicField,
    pub rho: PeriodicField,
    pub t: f64,
    pub kind: EquationKind,
}

impl EulerianState {
    pub fn new(kind: EquationKind, u: PeriodicField, rho: PeriodicField, t: f64) -> Result<Self> {
        if u.len() != rho.len() {
            return Err(Error::GridMismatch(u.len(), rho.len()));
        }
        for (i, s) in u.samples().iter().chain(rho.samples()).enumerate() {
            if !s.is_finite() {
                return Err(Error::NonFinite(i % u.len()));
            }
        }
        check_chart(kind, &TangentPair { first: u.clone(), second: rho.clone() })?;
        let rho = if kind.is_two_component() { rho } else { PeriodicField::zeros(u.len())? };
        Ok(Self { u, rho, t, kind })
    }
}

/// Largest stable step, `0.5 / (N max|u|)`.
pub fn cfl_bound(u: &PeriodicField) -> f64 {
    let umax = u.sup_norm();
    if umax == 0.0 {
        f64::INFINITY
    } else {
        0.5 / (u.len() as f64 * umax)
    }
}

/// Right-hand side `(u_t, ρ_t)` of the Eulerian system.
///
/// ```text
/// A = -∂²ₓ     u_t = -u uₓ - ½ A⁻¹(uₓ² + ρ²)ₓ
/// A = μ - ∂²ₓ  u_t = -u uₓ - A⁻¹(2μ(u)u + ½uₓ² + ½ρ²)ₓ
///              ρ_t = -(uρ)ₓ
/// ```
///
/// With `dealias` the quadratic products are formed on a 3/2-padded grid.
pub fn eulerian_rhs(
    kind: EquationKind,
    u: &PeriodicField,
    rho: &PeriodicField,
    dealias: bool,
) -> Result<(PeriodicField, PeriodicField)> {
    let mul = |a: &PeriodicField, b: &PeriodicField| {
        if dealias {
            a.multiply_dealiased(b)
        } else {
            a.multiply(b)
        }
    };
    let ux = u.derivative();
    let two = kind.is_two_component();
    let advect = mul(u, &ux);
    let nonlocal = match kind.inertia() {
        InertiaOperatorKind::NegDxx => {
            let mut g = mul(&ux, &ux);
            if two {
                g += &mul(rho, rho);
            }
            g.derivative().inv_neg_dxx()?.scale(0.5)
        }
        InertiaOperatorKind::MuMinusDxx => {
            let mut g = u.scale(2.0 * u.mean()) + mul(&ux, &ux).scale(0.5);
            if two {
                g += &mul(rho, rho).scale(0.5);
            }
            g.derivative().inv_mu_minus_dxx()
        }
    };
    let u_t = -(advect + nonlocal);
    let rho_t = if two { -mul(u, rho).derivative() } else { PeriodicField::zeros(u.len())? };
    Ok((u_t, rho_t))
}

/// One RK4 step of the pseudospectral method of lines.
pub fn eulerian_step(s: &EulerianState, dt: f64, dealias: bool) -> Result<EulerianState> {
    if dt.is_nan() || dt <= 0.0 {
        return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
    }
    let bound = cfl_bound(&s.u);
    if dt > bound {
        return Err(Error::CflViolation { dt, bound });
    }
    let kind = s.kind;
    let rhs = |u: &PeriodicField, r: &PeriodicField| eulerian_rhs(kind, u, r, dealias);
    let (ku1, kr1) = rhs(&s.u, &s.rho)?;
    let (ku2, kr2) = rhs(&s.u.axpy(0.5 * dt, &ku1), &s.rho.axpy(0.5 * dt, &kr1))?;
    let (ku3, kr3) = rhs(&s.u.axpy(0.5 * dt, &ku2), &s.rho.axpy(0.5 * dt, &kr2))?;
    let (ku4, kr4) = rhs(&s.u.axpy(dt, &ku3), &s.rho.axpy(dt, &kr3))?;
    let combine = |y: &PeriodicField, k1: &PeriodicField, k2, k3, k4| {
        y.axpy(dt / 6.0, k1).axpy(dt / 3.0, k2).axpy(dt / 3.0, k3).axpy(dt / 6.0, k4)
    };
    let mut u = combine(&s.u, &ku1, &ku2, &ku3, &ku4);
    let rho = combine(&s.rho, &kr1, &kr2, &kr3, &kr4);
    if kind.chart_constrained() {
        let value = u.value_at_zero();
        if value.abs() > 1e-12 * (1.0 + u.sup_norm()) {
            return Err(Error::ChartViolation { value });
        }
        u = u.offset(-value);
    }
    if !u.is_finite() || !rho.is_finite() {
        return Err(Error::NonFinite(0));
    }
    Ok(EulerianState { u, rho, t: s.t + dt, kind })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const N: usize = 64;

    #[test]
    fn constant_velocity_is_stationary() {
        let c = PeriodicField::constant(N, 0.7).unwrap();
        let mut s = EulerianState::new(EquationKind::TwoMuHs, c.clone(), PeriodicField::zeros(N).unwrap(), 0.0).unwrap();
        for _ in 0..50 {
            s = eulerian_step(&s, 1e-3, false).unwrap();
        }
        assert!(s.u.max_abs_diff(&c) < 1e-12);
    }

    #[test]
    fn density_drives_velocity() {
        let u = PeriodicField::zeros(N).unwrap();
        let rho = PeriodicField::sin_mode(N, 1).unwrap();
        let (u_t, rho_t) = eulerian_rhs(EquationKind::TwoHs, &u, &rho, false).unwrap();
        let expected = PeriodicField::from_fn(N, |x| -(4.0 * PI * x).sin() / (16.0 * PI)).unwrap();
        assert!(u_t.max_abs_diff(&expected) < 1e-15);
        assert!(rho_t.sup_norm() < 1e-15);
    }

    #[test]
    fn cfl_is_enforced() {
        let u = PeriodicField::constant(N, 10.0).unwrap();
        let s = EulerianState::new(EquationKind::MuHs, u, PeriodicField::zeros(N).unwrap(), 0.0).unwrap();
        assert!(matches!(eulerian_step(&s, 1e-2, false), Err(Error::CflViolation { .. })));
    }
}
