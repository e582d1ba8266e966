//! Circle diffeomorphisms and the semidirect product `Diff(S) x functions`.
//!
//! A diffeomorphism is stored as `phi = id + v` with `v` periodic; the lift
//! `phi(x + 1) = phi(x) + 1` is implicit. The group law on pairs is
//! `(phi1, f1)(phi2, f2) = (phi1 o phi2, f2 + f1 o phi2)`.

use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PeriodicField;

/// Smallest slope `phi_x` accepted for a valid diffeomorphism.
pub const SLOPE_FLOOR: f64 = 1e-6;
/// Residual tolerance of the pointwise inversion.
pub const NEWTON_TOL: f64 = 1e-13;
pub const NEWTON_MAX_ITER: usize = 50;
/// `|v(0)|` below which the base point counts as fixed.
pub const BASE_POINT_TOL: f64 = 1e-12;

/// Orientation-preserving diffeomorphism `x -> x + v(x)` of the circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleDiffeo {
    displacement: PeriodicField,
    base_point_fixed: bool,
}

impl CircleDiffeo {
    /// Validates the slope; `base_point_fixed` is set when `|v(0)| < 1e-12`.
    pub fn new(displacement: PeriodicField) -> Result<Self> {
        let slope = displacement.derivative().offset(1.0);
        let min_slope = slope.min();
        if min_slope <= SLOPE_FLOOR {
            return Err(Error::OrientationLost { min_slope, floor: SLOPE_FLOOR });
        }
        let base_point_fixed = displacement.value_at_zero().abs() < BASE_POINT_TOL;
        Ok(Self { displacement, base_point_fixed })
    }

    pub fn from_displacement_fn(n: usize, v: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(PeriodicField::from_fn(n, v)?)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(PeriodicField::zeros(n)?)
    }

    /// `x -> x + a`.
    pub fn rotation(n: usize, a: f64) -> Result<Self> {
        Self::new(PeriodicField::constant(n, a)?)
    }

    pub fn n(&self) -> usize {
        self.displacement.len()
    }

    pub fn displacement(&self) -> &PeriodicField {
        &self.displacement
    }

    pub fn base_point_fixed(&self) -> bool {
        self.base_point_fixed
    }

    /// Errors unless `phi(0) = 0`.
    pub fn require_base_point_fixed(&self) -> Result<()> {
        if self.base_point_fixed {
            Ok(())
        } else {
            Err(Error::BasePointMoved(self.displacement.value_at_zero()))
        }
    }

    /// `phi_x = 1 + v_x` on the grid.
    pub fn slope(&self) -> PeriodicField {
        self.displacement.derivative().offset(1.0)
    }

    pub fn min_slope(&self) -> f64 {
        self.slope().min()
    }

    /// `phi(x)` on the lift.
    pub fn eval(&self, x: f64) -> f64 {
        x + self.displacement.eval(x)
    }

    /// `self o other`, whose displacement is `v_self o other + v_other`.
    pub fn compose(&self, other: &CircleDiffeo) -> Result<CircleDiffeo> {
        let v = self.displacement.compose(other) + other.displacement.clone();
        Self::new(v)
    }

    /// Pointwise inversion of the lift by safeguarded Newton iteration.
    pub fn inverse(&self) -> Result<CircleDiffeo> {
        let n = self.n();
        let interp = self.displacement.interpolant();
        let vmax = self.displacement.max();
        let vmin = self.displacement.min();
        let margin = 0.1 * (vmax - vmin) + 1e-3;
        let mut w = Vec::with_capacity(n);
        for j in 0..n {
            let x = j as f64 / n as f64;
            let residual = |y: f64| y + interp.eval(y) - x;
            let mut lo = x - vmax - margin;
            let mut hi = x - vmin + margin;
            while residual(lo) > 0.0 {
                lo -= margin;
            }
            while residual(hi) < 0.0 {
                hi += margin;
            }
            let mut y = (x - self.displacement.samples()[j]).clamp(lo, hi);
            let mut converged = false;
            let mut r = residual(y);
            for _ in 0..NEWTON_MAX_ITER {
                if r.abs() < NEWTON_TOL {
                    converged = true;
                    break;
                }
                if r > 0.0 {
                    hi = y;
                } else {
                    lo = y;
                }
                let d = 1.0 + interp.eval_derivative(y, 1);
                let newton = y - r / d;
                y = if d > 0.0 && newton > lo && newton < hi {
                    newton
                } else {
                    0.5 * (lo + hi)
                };
                r = residual(y);
                if hi - lo < 1e-15 {
                    converged = r.abs() < 1e3 * NEWTON_TOL;
                    break;
                }
            }
            if !converged && r.abs() >= NEWTON_TOL {
                return Err(Error::NewtonDivergence { x, residual: r });
            }
            w.push(y - x);
        }
        let mut inv = Self::new(PeriodicField::from_samples(w)?)?;
        if self.base_point_fixed {
            inv.base_point_fixed = true;
        }
        Ok(inv)
    }
}

/// Element `(phi, f)` of the semidirect product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub phi: CircleDiffeo,
    pub f: PeriodicField,
}

impl GroupElement {
    pub fn new(phi: CircleDiffeo, f: PeriodicField) -> Result<Self> {
        if phi.n() != f.len() {
            return Err(Error::GridMismatch(phi.n(), f.len()));
        }
        Ok(Self { phi, f })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(CircleDiffeo::identity(n)?, PeriodicField::zeros(n)?)
    }

    pub fn n(&self) -> usize {
        self.f.len()
    }

    /// `(phi1 o phi2, f2 + f1 o phi2)`.
    pub fn product(&self, other: &GroupElement) -> Result<GroupElement> {
        let phi = self.phi.compose(&other.phi)?;
        let f = &other.f + &self.f.compose(&other.phi);
        Self::new(phi, f)
    }

    /// `(phi^{-1}, -f o phi^{-1})`.
    pub fn inverse(&self) -> Result<GroupElement> {
        let inv = self.phi.inverse()?;
        let f = -self.f.compose(&inv);
        Self::new(inv, f)
    }

    /// Sup-norm distance of both components.
    pub fn distance(&self, other: &GroupElement) -> f64 {
        self.phi
            .displacement()
            .max_abs_diff(other.phi.displacement())
            .max(self.f.max_abs_diff(&other.f))
    }
}

pub fn group_product(a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
    a.product(b)
}

pub fn group_inverse(a: &GroupElement) -> Result<GroupElement> {
    a.inverse()
}

/// A vector `(u1, u2)` in the tangent space of the product group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangentPair {
    pub first: PeriodicField,
    pub second: PeriodicField,
}

impl TangentPair {
    pub fn new(first: PeriodicField, second: PeriodicField) -> Result<Self> {
        if first.len() != second.len() {
            return Err(Error::GridMismatch(first.len(), second.len()));
        }
        Ok(Self { first, second })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(PeriodicField::zeros(n)?, PeriodicField::zeros(n)?)
    }

    /// `(u, 0)`.
    pub fn first_only(u: PeriodicField) -> Self {
        let n = u.len();
        Self { first: u, second: PeriodicField::zeros(n).expect("valid grid") }
    }

    /// `(0, u)`.
    pub fn second_only(u: PeriodicField) -> Self {
        let n = u.len();
        Self { first: PeriodicField::zeros(n).expect("valid grid"), second: u }
    }

    pub fn n(&self) -> usize {
        self.first.len()
    }

    pub fn derivative(&self) -> Self {
        Self { first: self.first.derivative(), second: self.second.derivative() }
    }

    /// Componentwise product with a scalar field.
    pub fn mul_field(&self, g: &PeriodicField) -> Self {
        Self { first: self.first.multiply(g), second: self.second.multiply(g) }
    }

    pub fn scale(&self, a: f64) -> Self {
        Self { first: self.first.scale(a), second: self.second.scale(a) }
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: f64, other: &Self) -> Self {
        Self { first: self.first.axpy(a, &other.first), second: self.second.axpy(a, &other.second) }
    }

    pub fn compose(&self, phi: &CircleDiffeo) -> Self {
        Self { first: self.first.compose(phi), second: self.second.compose(phi) }
    }

    pub fn sup_norm(&self) -> f64 {
        self.first.sup_norm().max(self.second.sup_norm())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.first.max_abs_diff(&other.first).max(self.second.max_abs_diff(&other.second))
    }

    pub fn is_finite(&self) -> bool {
        self.first.is_finite() && self.second.is_finite()
    }
}

impl Add for &TangentPair {
    type Output = TangentPair;

    fn add(self, rhs: Self) -> TangentPair {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &TangentPair {
    type Output = TangentPair;

    fn sub(self, rhs: Self) -> TangentPair {
        self.axpy(-1.0, rhs)
    }
}

impl Neg for &TangentPair {
    type Output = TangentPair;

    fn neg(self) -> TangentPair {
        self.scale(-1.0)
    }
}

/// `Ad_(phi,f)(u, rho) = ((phi_x u) o phi^{-1}, (f_x u + rho) o phi^{-1})`.
///
/// The first component is the push-forward of the vector field `u`.
pub fn adjoint(a: &GroupElement, t: &TangentPair) -> Result<TangentPair> {
    let inv = a.phi.inverse()?;
    let pushed = a.phi.slope().multiply(&t.first);
    let second = &a.f.derivative().multiply(&t.first) + &t.second;
    Ok(TangentPair { first: pushed.compose(&inv), second: second.compose(&inv) })
}

/// Lie bracket `[(u1,u2),(v1,v2)] = (v1x u1 - u1x v1, v2x u1 - u2x v1)`.
pub fn ad_bracket(s: &TangentPair, t: &TangentPair) -> TangentPair {
    let first = &t.first.derivative().multiply(&s.first) - &s.first.derivative().multiply(&t.first);
    let second =
        &t.second.derivative().multiply(&s.first) - &s.second.derivative().multiply(&t.first);
    TangentPair { first, second }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const N: usize = 64;

    fn tp(x: f64) -> f64 {
        2.0 * PI * x
    }

    fn bump(amp: f64) -> CircleDiffeo {
        CircleDiffeo::from_displacement_fn(N, |x| amp * tp(x).sin() / (2.0 * PI)).unwrap()
    }

    fn field(f: impl Fn(f64) -> f64) -> PeriodicField {
        PeriodicField::from_fn(N, f).unwrap()
    }

    #[test]
    fn validity_checks() {
        let steep = PeriodicField::from_fn(N, |x| 0.3 * tp(x).sin() / 1.0).unwrap();
        assert!(matches!(CircleDiffeo::new(steep), Err(Error::OrientationLost { .. })));
        assert!(bump(0.5).base_point_fixed());
        let rot = CircleDiffeo::rotation(N, 0.1).unwrap();
        assert!(!rot.base_point_fixed());
        assert!(matches!(rot.require_base_point_fixed(), Err(Error::BasePointMoved(_))));
    }

    #[test]
    fn compose_examples() {
        let phi = bump(0.1);
        let id = CircleDiffeo::identity(N).unwrap();
        assert!(id.compose(&phi).unwrap().displacement().max_abs_diff(phi.displacement()) < 1e-15);
        let r = CircleDiffeo::rotation(N, 0.2)
            .unwrap()
            .compose(&CircleDiffeo::rotation(N, 0.15).unwrap())
            .unwrap();
        assert!(r.displacement().max_abs_diff(&field(|_| 0.35)) < 1e-15);
        // dense evaluation oracle: v(x) + v(x + v(x)) with v = 0.1 sin(2 pi x)/(2 pi)
        let v = |x: f64| 0.1 * tp(x).sin() / (2.0 * PI);
        let oracle = field(|x| v(x) + v(x + v(x)));
        assert!(phi.compose(&phi).unwrap().displacement().max_abs_diff(&oracle) < 1e-9);
    }

    #[test]
    fn inverse_examples() {
        let id = CircleDiffeo::identity(N).unwrap();
        assert_eq!(id.inverse().unwrap().displacement().sup_norm(), 0.0);
        let r = CircleDiffeo::rotation(N, 0.3).unwrap().inverse().unwrap();
        assert!(r.displacement().max_abs_diff(&field(|_| -0.3)) < 1e-14);
        let phi = bump(0.2);
        let inv = phi.inverse().unwrap();
        assert!(inv.base_point_fixed());
        let round = phi.compose(&inv).unwrap();
        assert!(round.displacement().sup_norm() < 1e-10);
        // pointwise: phi(phi^{-1}(x_j)) = x_j
        for (j, x) in inv.displacement().grid().enumerate() {
            let y = x + inv.displacement().samples()[j];
            assert!((phi.eval(y) - x).abs() < 1e-13);
        }
    }

    #[test]
    fn inverse_of_steep_map() {
        // slope dips to 0.02: Newton needs the bisection safeguard
        let phi = bump(0.98);
        let inv = phi.inverse().unwrap();
        for (j, x) in inv.displacement().grid().enumerate() {
            let y = x + inv.displacement().samples()[j];
            assert!((phi.eval(y) - x).abs() < 1e-12);
        }
    }

    #[test]
    fn group_product_examples() {
        let a = GroupElement::new(bump(0.1), field(|x| tp(x).cos())).unwrap();
        let e = GroupElement::identity(N).unwrap();
        assert!(a.product(&e).unwrap().distance(&a) < 1e-15);
        let ainv = a.inverse().unwrap();
        assert!(a.product(&ainv).unwrap().distance(&e) < 1e-9);
        assert!(ainv.product(&a).unwrap().distance(&e) < 1e-9);

        let a = GroupElement::new(CircleDiffeo::rotation(N, 0.25).unwrap(), field(|x| tp(x).sin()))
            .unwrap();
        let b = GroupElement::new(CircleDiffeo::rotation(N, 0.25).unwrap(), field(|_| 0.0)).unwrap();
        let ab = group_product(&a, &b).unwrap();
        assert!(ab.phi.displacement().max_abs_diff(&field(|_| 0.5)) < 1e-15);
        assert!(ab.f.max_abs_diff(&field(|x| tp(x + 0.25).sin())) < 1e-14);
    }

    #[test]
    fn group_inverse_examples() {
        let e = GroupElement::identity(N).unwrap();
        assert!(group_inverse(&e).unwrap().distance(&e) < 1e-15);
        let a = GroupElement::new(CircleDiffeo::rotation(N, 0.4).unwrap(), field(|_| 0.0)).unwrap();
        let inv = group_inverse(&a).unwrap();
        assert!(inv.phi.displacement().max_abs_diff(&field(|_| -0.4)) < 1e-14);
        assert!(inv.f.sup_norm() < 1e-15);
    }

    #[test]
    fn adjoint_examples() {
        let t = TangentPair::new(field(|x| tp(x).sin()), field(|x| tp(x).cos())).unwrap();
        let e = GroupElement::identity(N).unwrap();
        assert!(adjoint(&e, &t).unwrap().max_abs_diff(&t) < 1e-14);

        let c = 0.1;
        let a = GroupElement::new(CircleDiffeo::rotation(N, c).unwrap(), field(|_| 0.0)).unwrap();
        let s = TangentPair::first_only(field(|x| tp(x).sin()));
        let out = adjoint(&a, &s).unwrap();
        assert!(out.first.max_abs_diff(&field(|x| tp(x - c).sin())) < 1e-14);
        assert!(out.second.sup_norm() < 1e-15);
    }

    #[test]
    fn ad_bracket_examples() {
        let t = TangentPair::new(field(|x| tp(x).sin()), field(|x| tp(x).cos())).unwrap();
        assert!(ad_bracket(&t, &t).sup_norm() < 1e-13);
        let s = TangentPair::first_only(field(|x| tp(x).sin()));
        let t = TangentPair::second_only(field(|x| tp(x).cos()));
        let b = ad_bracket(&s, &t);
        assert!(b.first.sup_norm() < 1e-15);
        assert!(b.second.max_abs_diff(&field(|x| -2.0 * PI * tp(x).sin().powi(2))) < 1e-12);
    }
}
