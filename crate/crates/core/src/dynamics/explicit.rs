//! The HS geodesic through the identity in closed form,
//! `φ(t) = id - ⅛ A⁻¹∂ₓ(u₀ₓ²)(1 - cos 2t) + ½ u₀ sin 2t`,
//! for `u₀(0) = 0` and `¼∫u₀ₓ² = 1`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::field::PeriodicField;
use crate::group::CircleDiffeo;

const NORMALIZATION_TOL: f64 = 1e-8;

/// `¼∫u₀ₓ²`, the HS energy with the quarter-weighted metric.
pub fn hs_normalization(u0: &PeriodicField) -> f64 {
    let ux = u0.derivative();
    0.25 * ux.inner(&ux)
}

fn check_initial(u0: &PeriodicField) -> Result<()> {
    let value = hs_normalization(u0);
    if (value - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NormalizationError { value });
    }
    let at_zero = u0.value_at_zero();
    if at_zero.abs() > 1e-10 * (1.0 + u0.sup_norm()) {
        return Err(Error::ChartViolation { value: at_zero });
    }
    Ok(())
}

/// `T* = π/2 + arctan(½ min u₀ₓ)`, with the minimum taken on the interpolant.
pub fn hs_blowup_time(u0: &PeriodicField) -> Result<f64> {
    check_initial(u0)?;
    let (_, min_ux) = u0.derivative().min_refined();
    Ok(FRAC_PI_2 + (0.5 * min_ux).atan())
}

fn drift_profile(u0: &PeriodicField) -> Result<PeriodicField> {
    let ux = u0.derivative();
    ux.multiply(&ux).derivative().inv_neg_dxx()
}

pub fn explicit_hs_geodesic(u0: &PeriodicField, t: f64) -> Result<CircleDiffeo> {
    let t_star = hs_blowup_time(u0)?;
    if t >= t_star {
        return Err(Error::BlowupReached { t, t_star });
    }
    let a = drift_profile(u0)?;
    let v = a.scale(-(1.0 - (2.0 * t).cos()) / 8.0).axpy(0.5 * (2.0 * t).sin(), u0);
    CircleDiffeo::new(v)
}

/// `φ_t` of [`explicit_hs_geodesic`].
pub fn explicit_hs_velocity(u0: &PeriodicField, t: f64) -> Result<PeriodicField> {
    let t_star = hs_blowup_time(u0)?;
    if t >= t_star {
        return Err(Error::BlowupReached { t, t_star });
    }
    let a = drift_profile(u0)?;
    Ok(a.scale(-(2.0 * t).sin() / 4.0).axpy((2.0 * t).cos(), u0))
}

/// `sup |φₓ - (cos t + ½u₀ₓ sin t)²|` along the explicit geodesic.
pub fn slope_identity_residual(u0: &PeriodicField, t: f64) -> Result<f64> {
    let phi = explicit_hs_geodesic(u0, t)?;
    let square = u0.derivative().scale(0.5 * t.sin()).offset(t.cos());
    Ok(phi.slope().max_abs_diff(&square.multiply(&square)))
}
