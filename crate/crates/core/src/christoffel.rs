//! Christoffel maps and right-invariant metrics of the four equations.
//!
//! At the identity the maps are
//!
//! ```text
//! HS      Γ(X,Y) = -½ A⁻¹ (X₁ₓ Y₁ₓ)ₓ                                   A = -∂²ₓ, A⁻¹f(0) = 0
//! μHS     Γ(X,Y) = -A⁻¹ (μ(X₁)Y₁ + μ(Y₁)X₁ + ½ X₁ₓ Y₁ₓ)ₓ               A = μ - ∂²ₓ
//! 2HS     Γ(X,Y) = (Γ_HS(X₁,Y₁) - ½ A⁻¹ (X₂Y₂)ₓ,  -½(X₁ₓY₂ + Y₁ₓX₂))
//! 2μHS    Γ(X,Y) = (Γ_μHS(X₁,Y₁) - ½ A⁻¹ (X₂Y₂)ₓ, -½(X₁ₓY₂ + Y₁ₓX₂))
//! ```
//!
//! and at a base point `(φ, f)` they are conjugated by right translation,
//! `Γ_(φ,f)(X,Y) = Γ(X∘φ⁻¹, Y∘φ⁻¹)∘φ`. One-component equations are carried as
//! tangent pairs whose second component is ignored on input and zero on output.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{InertiaOperatorKind, PeriodicField};
use crate::group::{GroupElement, TangentPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EquationKind {
    #[serde(rename = "HS")]
    Hs,
    #[serde(rename = "muHS")]
    MuHs,
    #[serde(rename = "2HS")]
    TwoHs,
    #[serde(rename = "2muHS")]
    TwoMuHs,
}

impl EquationKind {
    pub const ALL: [EquationKind; 4] =
        [EquationKind::Hs, EquationKind::MuHs, EquationKind::TwoHs, EquationKind::TwoMuHs];

    pub fn inertia(self) -> InertiaOperatorKind {
        match self {
            EquationKind::Hs | EquationKind::TwoHs => InertiaOperatorKind::NegDxx,
            EquationKind::MuHs | EquationKind::TwoMuHs => InertiaOperatorKind::MuMinusDxx,
        }
    }

    pub fn is_two_component(self) -> bool {
        matches!(self, EquationKind::TwoHs | EquationKind::TwoMuHs)
    }

    /// Whether first components live in the chart `u(0) = 0` (the quotient by rotations).
    pub fn chart_constrained(self) -> bool {
        self.inertia() == InertiaOperatorKind::NegDxx
    }

    pub fn name(self) -> &'static str {
        match self {
            EquationKind::Hs => "HS",
            EquationKind::MuHs => "muHS",
            EquationKind::TwoHs => "2HS",
            EquationKind::TwoMuHs => "2muHS",
        }
    }
}

impl fmt::Display for EquationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EquationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('μ', "mu").to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "hs" => Ok(EquationKind::Hs),
            "muhs" => Ok(EquationKind::MuHs),
            "2hs" | "twohs" => Ok(EquationKind::TwoHs),
            "2muhs" | "twomuhs" => Ok(EquationKind::TwoMuHs),
            _ => Err(Error::InvalidArgument(format!("unknown equation '{s}'"))),
        }
    }
}

/// Weight of the first-component (inertia-operator) part of the metric.
///
/// With the default `1.0` the 2HS sectional curvature is `1/4`; `0.25`
/// reproduces the scaling under which the one-component HS curvature is `1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricConvention {
    pub h1_scale: f64,
}

impl Default for MetricConvention {
    fn default() -> Self {
        Self { h1_scale: 1.0 }
    }
}

impl MetricConvention {
    pub fn new(h1_scale: f64) -> Result<Self> {
        if h1_scale > 0.0 && h1_scale.is_finite() {
            Ok(Self { h1_scale })
        } else {
            Err(Error::InvalidArgument(format!("h1_scale must be positive, got {h1_scale}")))
        }
    }

    pub fn quarter() -> Self {
        Self { h1_scale: 0.25 }
    }
}

/// Rejects first components that leave the chart `u(0) = 0`.
pub fn check_chart(kind: EquationKind, x: &TangentPair) -> Result<()> {
    if !kind.chart_constrained() {
        return Ok(());
    }
    let value = x.first.value_at_zero();
    if value.abs() > 1e-10 * (1.0 + x.first.sup_norm()) {
        return Err(Error::ChartViolation { value });
    }
    Ok(())
}

fn zero_second(n: usize) -> PeriodicField {
    PeriodicField::zeros(n).expect("valid grid")
}

/// Christoffel map at the identity.
pub fn christoffel_id(kind: EquationKind, x: &TangentPair, y: &TangentPair) -> Result<TangentPair> {
    check_chart(kind, x)?;
    check_chart(kind, y)?;
    let x1x = x.first.derivative();
    let y1x = y.first.derivative();
    let two = kind.is_two_component();

    let first = match kind.inertia() {
        InertiaOperatorKind::NegDxx => {
            let mut g = x1x.multiply(&y1x);
            if two {
                g += &x.second.multiply(&y.second);
            }
            g.derivative().inv_neg_dxx()?.scale(-0.5)
        }
        InertiaOperatorKind::MuMinusDxx => {
            let mut g = y.first.scale(x.first.mean()).axpy(y.first.mean(), &x.first);
            g += &x1x.multiply(&y1x).scale(0.5);
            if two {
                g += &x.second.multiply(&y.second).scale(0.5);
            }
            -g.derivative().inv_mu_minus_dxx()
        }
    };
    let second = if two {
        (&x1x.multiply(&y.second) + &y1x.multiply(&x.second)).scale(-0.5)
    } else {
        zero_second(x.n())
    };
    Ok(TangentPair { first, second })
}

/// Christoffel map at `base` by conjugation: `Γ(X∘φ⁻¹, Y∘φ⁻¹)∘φ`.
pub fn christoffel_at(
    kind: EquationKind,
    base: &GroupElement,
    x: &TangentPair,
    y: &TangentPair,
) -> Result<TangentPair> {
    let inv = base.phi.inverse()?;
    let g = christoffel_id(kind, &x.compose(&inv), &y.compose(&inv))?;
    Ok(g.compose(&base.phi))
}

/// Christoffel map at `base` written directly in Lagrangian variables.
///
/// Equal to [`christoffel_at`] but avoids `φ⁻¹`: with `u = U∘φ⁻¹` one has
/// `uₓ∘φ = Uₓ/φₓ`, and `A⁻¹∂ₓg` composed with `φ` is the primitive of
/// `(g∘φ)φₓ` up to terms fixed by the normalization of `A⁻¹`. The only
/// division is by `φₓ`, which keeps the map accurate when `φ⁻¹` is steep.
/// Chart-constrained equations require `φ(0) = 0`.
pub fn christoffel_pullback(
    kind: EquationKind,
    base: &GroupElement,
    x: &TangentPair,
    y: &TangentPair,
) -> Result<TangentPair> {
    let phi = &base.phi;
    let v = phi.displacement();
    let px = phi.slope();
    let min_slope = px.min();
    if min_slope <= 0.0 {
        return Err(Error::OrientationLost { min_slope, floor: 0.0 });
    }
    check_chart(kind, x)?;
    check_chart(kind, y)?;
    let two = kind.is_two_component();
    let x1x = x.first.derivative();
    let y1x = y.first.derivative();
    let grad = x1x.multiply(&y1x).divide(&px);

    // W = [A⁻¹∂ₓ g]∘φ (before normalization) where h = (g∘φ)φₓ.
    let primitive = |h: &PeriodicField| -> PeriodicField { (-h.antiderivative()).axpy(h.mean(), v) };

    let first = match kind.inertia() {
        InertiaOperatorKind::NegDxx => {
            phi.require_base_point_fixed()?;
            let mut h = grad.clone();
            if two {
                h += &x.second.multiply(&y.second).multiply(&px);
            }
            primitive(&h).scale(-0.5)
        }
        InertiaOperatorKind::MuMinusDxx => {
            let mu_x = x.first.inner(&px);
            let mu_y = y.first.inner(&px);
            let mut g = y.first.scale(mu_x).axpy(mu_y, &x.first);
            g += &grad.divide(&px).scale(0.5);
            if two {
                g += &x.second.multiply(&y.second).scale(0.5);
            }
            let w = primitive(&g.multiply(&px));
            let mean = w.inner(&px);
            -w.offset(-mean)
        }
    };
    let second = if two {
        (&x1x.multiply(&y.second) + &y1x.multiply(&x.second)).divide(&px).scale(-0.5)
    } else {
        zero_second(x.n())
    };
    Ok(TangentPair { first, second })
}

/// Right-invariant metric at `base`, written with the change of variables
/// `∫(U∘φ⁻¹)(V∘φ⁻¹) = ∫UVφₓ` and `∫(U∘φ⁻¹)ₓ(V∘φ⁻¹)ₓ = ∫UₓVₓ/φₓ`.
pub fn metric(
    kind: EquationKind,
    conv: MetricConvention,
    base: &GroupElement,
    u: &TangentPair,
    v: &TangentPair,
) -> f64 {
    let px = base.phi.slope();
    let grad = u.first.derivative().multiply(&v.first.derivative()).divide(&px).mean();
    let first = match kind.inertia() {
        InertiaOperatorKind::NegDxx => grad,
        InertiaOperatorKind::MuMinusDxx => u.first.inner(&px) * v.first.inner(&px) + grad,
    };
    let second = if kind.is_two_component() { u.second.multiply(&v.second).inner(&px) } else { 0.0 };
    conv.h1_scale * first + second
}

/// Metric at the identity.
pub fn metric_id(kind: EquationKind, conv: MetricConvention, u: &TangentPair, v: &TangentPair) -> f64 {
    let grad = u.first.derivative().inner(&v.first.derivative());
    let first = match kind.inertia() {
        InertiaOperatorKind::NegDxx => grad,
        InertiaOperatorKind::MuMinusDxx => u.first.mean() * v.first.mean() + grad,
    };
    let second = if kind.is_two_component() { u.second.inner(&v.second) } else { 0.0 };
    conv.h1_scale * first + second
}
