//! Reference computations that share no code path with the spectral operators
//! they check: everything here works with closed-form integrands and
//! Gauss–Legendre quadrature.

use crate::quadrature::GaussLegendre;

/// Green's function of `μ - ∂²ₓ` on the unit circle, `g(s) = ½s² - ½|s| + 13/12` on `[-½, ½]`.
pub fn mu_green(s: f64) -> f64 {
    let s = s - s.round();
    0.5 * s * s - 0.5 * s.abs() + 13.0 / 12.0
}

/// `(μ - ∂²ₓ)⁻¹ f` at `x` as `∫ g(x - y) f(y) dy`, split at the kink `y = x`.
pub fn mu_inverse_by_green(f: &impl Fn(f64) -> f64, x: f64) -> f64 {
    let gl = GaussLegendre::new(24);
    let integrand = |y: f64| mu_green(x - y) * f(y);
    gl.integrate_composite(x - 0.5, x, 16, integrand) + gl.integrate_composite(x, x + 0.5, 16, integrand)
}

/// `(-∂²ₓ)⁻¹ f` at `x` normalized by `w(0) = 0`, for `f` of zero mean:
/// `w(x) = -∫₀ˣ (x - z) f(z) dz + x ∫₀¹ (1 - z) f(z) dz`.
pub fn neg_dxx_inverse_by_quadrature(f: &impl Fn(f64) -> f64, x: f64) -> f64 {
    let gl = GaussLegendre::new(24);
    let inner = gl.integrate_composite(0.0, x.max(1e-300), 16, |z| (x - z) * f(z));
    let outer = gl.integrate_composite(0.0, 1.0, 16, |z| (1.0 - z) * f(z));
    -inner + x * outer
}
