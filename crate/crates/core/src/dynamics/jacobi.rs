use serde::{Deserialize, Serialize};

use super::lagrangian::GeodesicState;
use crate::christoffel::{christoffel_pullback, metric, EquationKind, MetricConvention};
use crate::curvature::curvature_tensor;
use crate::error::{Error, Result};
use crate::field::PeriodicField;
use crate::group::{CircleDiffeo, GroupElement, TangentPair};

/// Jacobi field `ξ` and its covariant derivative `Dξ/Dt` along a geodesic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobiState {
    pub geodesic: GeodesicState,
    pub xi: TangentPair,
    pub dxi: TangentPair,
}

impl JacobiState {
    pub fn new(geodesic: GeodesicState, xi: TangentPair, dxi: TangentPair) -> Result<Self> {
        let n = geodesic.n();
        if xi.n() != n || dxi.n() != n {
            return Err(Error::GridMismatch(n, xi.n().max(dxi.n())));
        }
        let (xi, dxi) = if geodesic.kind.is_two_component() {
            (xi, dxi)
        } else {
            (TangentPair::first_only(xi.first), TangentPair::first_only(dxi.first))
        };
        Ok(Self { geodesic, xi, dxi })
    }

    /// `‖ξ‖` in the metric at the current base point.
    pub fn norm(&self, conv: MetricConvention) -> f64 {
        metric(self.geodesic.kind, conv, &self.geodesic.base, &self.xi, &self.xi).sqrt()
    }
}

#[derive(Clone)]
struct Phase {
    v: PeriodicField,
    f: PeriodicField,
    w: TangentPair,
    xi: TangentPair,
    eta: TangentPair,
}

impl Phase {
    fn axpy(&self, a: f64, k: &Phase) -> Phase {
        Phase {
            v: self.v.axpy(a, &k.v),
            f: self.f.axpy(a, &k.f),
            w: self.w.axpy(a, &k.w),
            xi: self.xi.axpy(a, &k.xi),
            eta: self.eta.axpy(a, &k.eta),
        }
    }

    /// `ξ_t = η + Γ(ξ, w)` and `η_t = Γ(η, w) - R(ξ, w)w`, where the
    /// curvature is transported from the identity by right translation.
    fn rate(&self, kind: EquationKind) -> Result<Phase> {
        let phi = CircleDiffeo::new(self.v.clone())?;
        let base = GroupElement::new(phi, self.f.clone())?;
        let gamma = |x: &TangentPair, y: &TangentPair| christoffel_pullback(kind, &base, x, y);
        let acc = gamma(&self.w, &self.w)?;
        let inv = base.phi.inverse()?;
        let w_id = self.w.compose(&inv);
        let r = curvature_tensor(kind, &self.xi.compose(&inv), &w_id, &w_id)?.compose(&base.phi);
        Ok(Phase {
            v: self.w.first.clone(),
            f: self.w.second.clone(),
            w: acc,
            xi: &self.eta + &gamma(&self.xi, &self.w)?,
            eta: &gamma(&self.eta, &self.w)? - &r,
        })
    }
}

/// One RK4 step of the geodesic together with `D²ξ/Dt² = -R(ξ, γ')γ'`.
pub fn jacobi_step(j: &JacobiState, dt: f64) -> Result<JacobiState> {
    if dt.is_nan() || dt <= 0.0 {
        return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
    }
    let g = &j.geodesic;
    let kind = g.kind;
    let y = Phase {
        v: g.base.phi.displacement().clone(),
        f: g.base.f.clone(),
        w: g.velocity.clone(),
        xi: j.xi.clone(),
        eta: j.dxi.clone(),
    };
    let k1 = y.rate(kind)?;
    let k2 = y.axpy(0.5 * dt, &k1).rate(kind)?;
    let k3 = y.axpy(0.5 * dt, &k2).rate(kind)?;
    let k4 = y.axpy(dt, &k3).rate(kind)?;
    let next = y
        .axpy(dt / 6.0, &k1)
        .axpy(dt / 3.0, &k2)
        .axpy(dt / 3.0, &k3)
        .axpy(dt / 6.0, &k4);
    let geodesic = GeodesicState::new(
        kind,
        GroupElement::new(CircleDiffeo::new(next.v)?, next.f)?,
        next.w,
        g.t + dt,
    )?;
    JacobiState::new(geodesic, next.xi, next.eta)
}
