//! Riemann curvature tensor and sectional curvature at the identity.
//!
//! The tensor is assembled from the base-point derivative of the Christoffel
//! map, `R(u,v)w = D₁Γ(w,u)·v - D₁Γ(w,v)·u + Γ(Γ(w,v),u) - Γ(Γ(w,u),v)`.
//! [`curvature_tensor`] uses the closed expansion
//! `D₁Γ(X,Y)·v = -Γ(Xₓv₁,Y) - Γ(X,Yₓv₁) + Γ(X,Y)ₓv₁`, while
//! [`curvature_tensor_fd`] differentiates [`christoffel_at`] numerically along
//! the base path `(id + εv₁, εv₂)`.

use serde::{Deserialize, Serialize};

use crate::christoffel::{check_chart, christoffel_at, christoffel_id, metric_id, EquationKind, MetricConvention};
use crate::error::{Error, Result};
use crate::field::PeriodicField;
use crate::group::{CircleDiffeo, GroupElement, TangentPair};

/// Default finite-difference step of [`curvature_tensor_fd`].
pub const FD_STEP: f64 = 1e-4;

/// Relative size of the Gram determinant below which a plane is degenerate.
pub const GRAM_FLOOR: f64 = 1e-12;

/// Curvature data of the plane spanned by `u` and `v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    /// `R(u,v)v`.
    pub r_uvv: TangentPair,
    /// `⟨R(u,v)v, u⟩`.
    pub unnormalized: f64,
    /// `⟨R(u,v)v, u⟩ / gram_det`; `None` when the plane is degenerate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalized: Option<f64>,
    /// `⟨u,u⟩⟨v,v⟩ - ⟨u,v⟩²`.
    pub gram_det: f64,
    pub gram_floor: f64,
}

impl CurvatureReport {
    pub fn normalized_value(&self) -> Result<f64> {
        self.normalized
            .ok_or(Error::DegenerateSpan { gram_det: self.gram_det, floor: self.gram_floor })
    }
}

fn check_all(kind: EquationKind, fields: &[&TangentPair]) -> Result<()> {
    fields.iter().try_for_each(|x| check_chart(kind, x))
}

/// `D₁Γ(X,Y)·v` at the identity, in closed form.
fn base_derivative(kind: EquationKind, x: &TangentPair, y: &TangentPair, v1: &PeriodicField) -> Result<TangentPair> {
    let a = christoffel_id(kind, &x.derivative().mul_field(v1), y)?;
    let b = christoffel_id(kind, x, &y.derivative().mul_field(v1))?;
    let c = christoffel_id(kind, x, y)?.derivative().mul_field(v1);
    Ok(&(&c - &a) - &b)
}

/// `Γ(Γ(w,v),u) - Γ(Γ(w,u),v)`.
fn quadratic_terms(kind: EquationKind, u: &TangentPair, v: &TangentPair, w: &TangentPair) -> Result<TangentPair> {
    let wv = christoffel_id(kind, w, v)?;
    let wu = christoffel_id(kind, w, u)?;
    Ok(&christoffel_id(kind, &wv, u)? - &christoffel_id(kind, &wu, v)?)
}

/// `R(u,v)w` at the identity from the analytic expansion.
pub fn curvature_tensor(kind: EquationKind, u: &TangentPair, v: &TangentPair, w: &TangentPair) -> Result<TangentPair> {
    check_all(kind, &[u, v, w])?;
    let along_v = base_derivative(kind, w, u, &v.first)?;
    let along_u = base_derivative(kind, w, v, &u.first)?;
    Ok(&(&along_v - &along_u) + &quadratic_terms(kind, u, v, w)?)
}

fn base_along(dir: &TangentPair, h: f64) -> Result<GroupElement> {
    GroupElement::new(CircleDiffeo::new(dir.first.scale(h))?, dir.second.scale(h))
}

/// `D₁Γ(X,Y)·dir` by central differences of [`christoffel_at`], Richardson-extrapolated over `h` and `h/2`.
fn base_derivative_fd(
    kind: EquationKind,
    x: &TangentPair,
    y: &TangentPair,
    dir: &TangentPair,
    h: f64,
) -> Result<TangentPair> {
    let central = |h: f64| -> Result<TangentPair> {
        let plus = christoffel_at(kind, &base_along(dir, h)?, x, y)?;
        let minus = christoffel_at(kind, &base_along(dir, -h)?, x, y)?;
        Ok((&plus - &minus).scale(0.5 / h))
    };
    let coarse = central(h)?;
    let fine = central(0.5 * h)?;
    Ok(fine.scale(4.0 / 3.0).axpy(-1.0 / 3.0, &coarse))
}

/// `R(u,v)w` at the identity with the base-point derivative taken numerically.
pub fn curvature_tensor_fd(
    kind: EquationKind,
    u: &TangentPair,
    v: &TangentPair,
    w: &TangentPair,
    eps: f64,
) -> Result<TangentPair> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidArgument(format!("finite-difference step must be positive, got {eps}")));
    }
    check_all(kind, &[u, v, w])?;
    let along_v = base_derivative_fd(kind, w, u, v, eps)?;
    let along_u = base_derivative_fd(kind, w, v, u, eps)?;
    Ok(&(&along_v - &along_u) + &quadratic_terms(kind, u, v, w)?)
}

/// Sectional curvature from a given `R(u,v)v`.
pub fn report_from_tensor(
    kind: EquationKind,
    conv: MetricConvention,
    u: &TangentPair,
    v: &TangentPair,
    r_uvv: TangentPair,
) -> CurvatureReport {
    let uu = metric_id(kind, conv, u, u);
    let vv = metric_id(kind, conv, v, v);
    let uv = metric_id(kind, conv, u, v);
    let gram_det = uu * vv - uv * uv;
    let gram_floor = GRAM_FLOOR * uu * vv;
    let unnormalized = metric_id(kind, conv, &r_uvv, u);
    let normalized = (gram_det > gram_floor).then(|| unnormalized / gram_det);
    CurvatureReport { r_uvv, unnormalized, normalized, gram_det, gram_floor }
}

/// Sectional curvature of the plane spanned by `u`, `v` at the identity.
pub fn sectional_curvature(
    kind: EquationKind,
    conv: MetricConvention,
    u: &TangentPair,
    v: &TangentPair,
) -> Result<CurvatureReport> {
    let r = curvature_tensor(kind, u, v, v)?;
    Ok(report_from_tensor(kind, conv, u, v, r))
}

/// Sectional curvature with the tensor computed by [`curvature_tensor_fd`].
pub fn sectional_curvature_fd(
    kind: EquationKind,
    conv: MetricConvention,
    u: &TangentPair,
    v: &TangentPair,
    eps: f64,
) -> Result<CurvatureReport> {
    let r = curvature_tensor_fd(kind, u, v, v, eps)?;
    Ok(report_from_tensor(kind, conv, u, v, r))
}

/// Unnormalized 2μHS sectional curvature in closed form,
/// `⟨Γ(u,v),Γ(u,v)⟩ - ⟨Γ(u,u),Γ(v,v)⟩ - 3μ(u₁ₓv₁)²`.
pub fn sectional_curvature_2muhs_formula(u: &TangentPair, v: &TangentPair) -> f64 {
    let kind = EquationKind::TwoMuHs;
    let conv = MetricConvention::default();
    let g = |a, b| christoffel_id(kind, a, b).expect("2μHS has no chart constraint");
    let uv = g(u, v);
    let uu = g(u, u);
    let vv = g(v, v);
    let m = u.first.derivative().inner(&v.first);
    metric_id(kind, conv, &uv, &uv) - metric_id(kind, conv, &uu, &vv) - 3.0 * m * m
}

/// The 2μHS sectional curvature split into the μHS part of the first
/// components and the four groups of second-component terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoMuHsSplit {
    pub s1: f64,
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
}

impl TwoMuHsSplit {
    pub fn total(&self) -> f64 {
        self.s1 + self.i1 + self.i2 + self.i3 + self.i4
    }
}

pub fn two_muhs_split(u: &TangentPair, v: &TangentPair) -> TwoMuHsSplit {
    let (u1, u2, v1, v2) = (&u.first, &u.second, &v.first, &v.second);
    let gamma0 = |a: &PeriodicField, b: &PeriodicField| -> PeriodicField {
        christoffel_id(
            EquationKind::MuHs,
            &TangentPair::first_only(a.clone()),
            &TangentPair::first_only(b.clone()),
        )
        .expect("μHS has no chart constraint")
        .first
    };
    let s1 = sectional_curvature_2muhs_formula(
        &TangentPair::first_only(u1.clone()),
        &TangentPair::first_only(v1.clone()),
    );

    let u2v2x = u2.multiply(v2).derivative();
    let u2sqx = u2.multiply(u2).derivative();
    let v2sqx = v2.multiply(v2).derivative();
    let i1 = 0.25 * u2v2x.inner(&u2v2x.inv_mu_minus_dxx());
    let i2 = -0.25 * u2sqx.inner(&v2sqx.inv_mu_minus_dxx());
    let i3 = -gamma0(u1, v1).inner(&u2v2x)
        + 0.5 * gamma0(u1, u1).inner(&v2sqx)
        + 0.5 * gamma0(v1, v1).inner(&u2sqx);
    let u1x = u1.derivative();
    let v1x = v1.derivative();
    let cross = &u1x.multiply(v2) + &v1x.multiply(u2);
    let i4 = 0.25 * cross.inner(&cross) - u1x.multiply(u2).inner(&v1x.multiply(v2));
    TwoMuHsSplit { s1, i1, i2, i3, i4 }
}
