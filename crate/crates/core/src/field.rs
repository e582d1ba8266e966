//! Real periodic functions on the unit circle, stored as samples on a uniform
//! grid and manipulated through their discrete Fourier series.
//!
//! Every field is identified with its trigonometric interpolant, so
//! differentiation, the inverse inertia operators and evaluation off the grid
//! are all exact for band-limited data (modes `|k| < N/2`).

use std::cell::RefCell;
use std::f64::consts::PI;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::CircleDiffeo;

/// Default grid size.
pub const DEFAULT_GRID: usize = 256;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Normalized Fourier coefficients `c_k = (1/N) sum_j f_j e^{-2 pi i j k / N}`.
fn forward(samples: &[f64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut buf: Vec<Complex64> = samples.iter().map(|&s| Complex64::new(s, 0.0)).collect();
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n));
    fft.process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

/// Inverse of [`forward`]; the imaginary part is discarded.
fn inverse(mut coeffs: Vec<Complex64>) -> Vec<f64> {
    let n = coeffs.len();
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n));
    fft.process(&mut coeffs);
    coeffs.into_iter().map(|c| c.re).collect()
}

/// Signed wavenumber of FFT bin `j` on an `n`-point grid. The Nyquist bin maps to `+n/2`.
#[inline]
pub(crate) fn wavenumber(j: usize, n: usize) -> i64 {
    if j <= n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

fn check_grid(n: usize) -> Result<()> {
    if n >= 16 && n.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::InvalidGridSize(n))
    }
}

/// Which inertia operator `A` induces the metric at the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InertiaOperatorKind {
    /// `A = -d^2/dx^2` acting on functions with `f(0) = 0`.
    NegDxx,
    /// `A = mu - d^2/dx^2` where `mu` is the mean.
    MuMinusDxx,
}

/// A real function on the circle `R/Z` sampled at `x_j = j/N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PeriodicField {
    samples: Vec<f64>,
}

impl TryFrom<Vec<f64>> for PeriodicField {
    type Error = Error;

    fn try_from(samples: Vec<f64>) -> Result<Self> {
        Self::from_samples(samples)
    }
}

impl From<PeriodicField> for Vec<f64> {
    fn from(f: PeriodicField) -> Self {
        f.samples
    }
}

impl PeriodicField {
    pub fn from_samples(samples: Vec<f64>) -> Result<Self> {
        check_grid(samples.len())?;
        if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { samples })
    }

    /// Samples `f` on the `n`-point grid.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        check_grid(n)?;
        Self::from_samples((0..n).map(|j| f(j as f64 / n as f64)).collect())
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::from_fn(n, |_| c)
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::constant(n, 0.0)
    }

    /// `sin(2 pi k x)` on an `n`-point grid.
    pub fn sin_mode(n: usize, k: i64) -> Result<Self> {
        Self::from_fn(n, |x| (2.0 * PI * k as f64 * x).sin())
    }

    /// `cos(2 pi k x)` on an `n`-point grid.
    pub fn cos_mode(n: usize, k: i64) -> Result<Self> {
        Self::from_fn(n, |x| (2.0 * PI * k as f64 * x).cos())
    }

    // Internal constructor for results of operations on valid fields.
    fn raw(samples: Vec<f64>) -> Self {
        debug_assert!(samples.iter().all(|s| s.is_finite()));
        Self { samples }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    /// Grid abscissae `j/N`.
    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.len() as f64;
        (0..self.len()).map(move |j| j as f64 / n)
    }

    pub fn value_at_zero(&self) -> f64 {
        self.samples[0]
    }

    pub fn is_finite(&self) -> bool {
        self.samples.iter().all(|s| s.is_finite())
    }

    /// Integral over the circle, i.e. the mean.
    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.len() as f64
    }

    /// `int f g dx`.
    pub fn inner(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len(), "grid mismatch");
        self.samples.iter().zip(&other.samples).map(|(a, b)| a * b).sum::<f64>()
            / self.len() as f64
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, s| m.max(s.abs()))
    }

    pub fn max(&self) -> f64 {
        self.samples.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.samples.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Minimum of the interpolant, located by Newton's method on the
    /// derivative starting from the smallest sample. Returns `(x, value)`.
    pub fn min_refined(&self) -> (f64, f64) {
        let n = self.len();
        let (j, &fj) = self
            .samples
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty field");
        let h = 1.0 / n as f64;
        let x0 = j as f64 * h;
        let interp = self.interpolant();
        let mut x = x0;
        for _ in 0..30 {
            let d1 = interp.eval_derivative(x, 1);
            let d2 = interp.eval_derivative(x, 2);
            if d2 <= 0.0 {
                break;
            }
            let step = (d1 / d2).clamp(-h, h);
            x -= step;
            if (x - x0).abs() > h {
                x = x0 + (x - x0).signum() * h;
            }
            if step.abs() < 1e-15 {
                break;
            }
        }
        let value = interp.eval(x);
        if value < fj {
            (x.rem_euclid(1.0), value)
        } else {
            (x0, fj)
        }
    }

    /// Normalized Fourier coefficients, FFT ordering.
    pub fn spectrum(&self) -> Vec<Complex64> {
        forward(&self.samples)
    }

    fn from_spectrum(coeffs: Vec<Complex64>) -> Self {
        Self::raw(inverse(coeffs))
    }

    /// Applies a Fourier multiplier given as a function of the signed wavenumber.
    fn multiplier(&self, m: impl Fn(i64) -> Complex64) -> Self {
        let n = self.len();
        let mut c = self.spectrum();
        for (j, cj) in c.iter_mut().enumerate() {
            *cj *= m(wavenumber(j, n));
        }
        Self::from_spectrum(c)
    }

    /// Spectral derivative. The Nyquist mode is dropped.
    pub fn derivative(&self) -> Self {
        let nyq = (self.len() / 2) as i64;
        self.multiplier(|k| {
            if k == nyq {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, 2.0 * PI * k as f64)
            }
        })
    }

    /// Periodic antiderivative of `f - mean(f)`, normalized to vanish at `x = 0`.
    pub fn antiderivative(&self) -> Self {
        let nyq = (self.len() / 2) as i64;
        let p = self.multiplier(|k| {
            if k == 0 || k == nyq {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, -1.0 / (2.0 * PI * k as f64))
            }
        });
        let p0 = p.value_at_zero();
        p.offset(-p0)
    }

    /// Pointwise product; grids are reconciled by Fourier resampling to the finer one.
    pub fn multiply(&self, other: &Self) -> Self {
        if self.len() == other.len() {
            return Self::raw(
                self.samples.iter().zip(&other.samples).map(|(a, b)| a * b).collect(),
            );
        }
        let n = self.len().max(other.len());
        self.resample(n).multiply(&other.resample(n))
    }

    /// Pointwise product computed on a 3/2-padded grid and truncated back,
    /// which removes the aliasing of quadratic terms.
    pub fn multiply_dealiased(&self, other: &Self) -> Self {
        let n = self.len().max(other.len());
        let a = self.resample(n);
        let b = other.resample(n);
        let m = 3 * n / 2;
        let pa = inverse(pad_spectrum(&a.spectrum(), m));
        let pb = inverse(pad_spectrum(&b.spectrum(), m));
        let prod: Vec<f64> = pa.iter().zip(&pb).map(|(x, y)| x * y).collect();
        let c = forward(&prod);
        Self::from_spectrum(pad_spectrum(&c, n))
    }

    /// Trigonometric interpolation onto an `m`-point grid.
    pub fn resample(&self, m: usize) -> Self {
        if m == self.len() {
            return self.clone();
        }
        check_grid(m).expect("resample target must be a valid grid size");
        Self::from_spectrum(pad_spectrum(&self.spectrum(), m))
    }

    /// `w = A^{-1} f` for `A = -d^2/dx^2`, normalized by `w(0) = 0`.
    /// Requires `f` to have zero mean.
    pub fn inv_neg_dxx(&self) -> Result<Self> {
        let tol = 1e-10 * (1.0 + self.sup_norm());
        let mean = self.mean();
        if mean.abs() > tol {
            return Err(Error::NonZeroMean { mean, tol });
        }
        let w = self.multiplier(|k| {
            if k == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(1.0 / (2.0 * PI * k as f64).powi(2), 0.0)
            }
        });
        let w0 = w.value_at_zero();
        Ok(w.offset(-w0))
    }

    /// `w = (mu - d^2/dx^2)^{-1} f`; invertible on all periodic fields.
    pub fn inv_mu_minus_dxx(&self) -> Self {
        self.multiplier(|k| {
            if k == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(1.0 / (2.0 * PI * k as f64).powi(2), 0.0)
            }
        })
    }

    pub fn apply_inverse(&self, kind: InertiaOperatorKind) -> Result<Self> {
        match kind {
            InertiaOperatorKind::NegDxx => self.inv_neg_dxx(),
            InertiaOperatorKind::MuMinusDxx => Ok(self.inv_mu_minus_dxx()),
        }
    }

    /// `A f` for the given inertia operator.
    pub fn apply_inertia(&self, kind: InertiaOperatorKind) -> Self {
        let d2 = self.derivative().derivative();
        match kind {
            InertiaOperatorKind::NegDxx => -d2,
            InertiaOperatorKind::MuMinusDxx => (-d2).offset(self.mean()),
        }
    }

    /// `f o phi`, evaluated through the Fourier interpolant of `f`.
    pub fn compose(&self, phi: &CircleDiffeo) -> Self {
        let interp = self.interpolant();
        let v = phi.displacement();
        let n = v.len() as f64;
        Self::raw(
            v.samples
                .iter()
                .enumerate()
                .map(|(j, vj)| interp.eval(j as f64 / n + vj))
                .collect(),
        )
    }

    /// `x -> f(x - c)`, exact for band-limited fields.
    pub fn shift(&self, c: f64) -> Self {
        let nyq = (self.len() / 2) as i64;
        self.multiplier(|k| {
            if k == nyq {
                Complex64::new((2.0 * PI * k as f64 * c).cos(), 0.0)
            } else {
                Complex64::from_polar(1.0, -2.0 * PI * k as f64 * c)
            }
        })
    }

    pub fn interpolant(&self) -> Interpolant {
        let n = self.len();
        let c = self.spectrum();
        Interpolant { coeffs: c[..=n / 2].to_vec(), n }
    }

    /// Value of the interpolant at an arbitrary point.
    pub fn eval(&self, x: f64) -> f64 {
        self.interpolant().eval(x)
    }

    pub fn offset(&self, c: f64) -> Self {
        Self::raw(self.samples.iter().map(|s| s + c).collect())
    }

    pub fn scale(&self, a: f64) -> Self {
        Self::raw(self.samples.iter().map(|s| a * s).collect())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_samples(self.samples.iter().map(|&s| f(s)).collect())
    }

    /// Pointwise quotient. Callers guarantee a non-vanishing denominator.
    pub fn divide(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "grid mismatch");
        Self::raw(self.samples.iter().zip(&other.samples).map(|(a, b)| a / b).collect())
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: f64, other: &Self) -> Self {
        assert_eq!(self.len(), other.len(), "grid mismatch");
        Self::raw(self.samples.iter().zip(&other.samples).map(|(x, y)| x + a * y).collect())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len(), "grid mismatch");
        self.samples
            .iter()
            .zip(&other.samples)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Moves normalized coefficients between grid sizes, splitting or folding the
/// Nyquist mode so that real signals stay real.
fn pad_spectrum(c: &[Complex64], m: usize) -> Vec<Complex64> {
    let n = c.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut out = vec![zero; m];
    let bin = |k: i64| -> usize { k.rem_euclid(m as i64) as usize };
    if m >= n {
        for (j, &cj) in c.iter().enumerate() {
            let k = wavenumber(j, n);
            if m > n && k == (n / 2) as i64 {
                out[bin(k)] += cj * 0.5;
                out[bin(-k)] += cj * 0.5;
            } else {
                out[bin(k)] += cj;
            }
        }
    } else {
        let half = (m / 2) as i64;
        for (j, &cj) in c.iter().enumerate() {
            let k = wavenumber(j, n);
            if k == (n / 2) as i64 {
                continue;
            }
            if k.abs() <= half {
                out[bin(k)] += cj;
            }
        }
        let nyq = m / 2;
        out[nyq] = Complex64::new(out[nyq].re, 0.0);
    }
    out
}

/// Trigonometric interpolant of a sampled field, for evaluation off the grid.
#[derive(Debug, Clone)]
pub struct Interpolant {
    /// Normalized coefficients for `k = 0..=N/2`.
    coeffs: Vec<Complex64>,
    n: usize,
}

impl Interpolant {
    pub fn eval(&self, x: f64) -> f64 {
        let half = self.n / 2;
        let z = Complex64::from_polar(1.0, 2.0 * PI * x);
        let mut zk = z;
        let mut acc = Complex64::new(0.0, 0.0);
        for c in &self.coeffs[1..half] {
            acc += c * zk;
            zk *= z;
        }
        self.coeffs[0].re + 2.0 * acc.re + self.coeffs[half].re * (PI * self.n as f64 * x).cos()
    }

    /// `order`-th derivative of the interpolant (Nyquist mode excluded for `order > 0`).
    pub fn eval_derivative(&self, x: f64, order: u32) -> f64 {
        if order == 0 {
            return self.eval(x);
        }
        let half = self.n / 2;
        let z = Complex64::from_polar(1.0, 2.0 * PI * x);
        let mut zk = z;
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.coeffs[1..half].iter().enumerate() {
            let ik = Complex64::new(0.0, 2.0 * PI * (k + 1) as f64).powu(order);
            acc += c * ik * zk;
            zk *= z;
        }
        2.0 * acc.re
    }
}

impl Add for &PeriodicField {
    type Output = PeriodicField;

    fn add(self, rhs: Self) -> PeriodicField {
        self.axpy(1.0, rhs)
    }
}

impl Add for PeriodicField {
    type Output = PeriodicField;

    fn add(self, rhs: Self) -> PeriodicField {
        &self + &rhs
    }
}

impl AddAssign<&PeriodicField> for PeriodicField {
    fn add_assign(&mut self, rhs: &PeriodicField) {
        assert_eq!(self.len(), rhs.len(), "grid mismatch");
        self.samples.iter_mut().zip(&rhs.samples).for_each(|(a, b)| *a += b);
    }
}

impl Sub for &PeriodicField {
    type Output = PeriodicField;

    fn sub(self, rhs: Self) -> PeriodicField {
        self.axpy(-1.0, rhs)
    }
}

impl Sub for PeriodicField {
    type Output = PeriodicField;

    fn sub(self, rhs: Self) -> PeriodicField {
        &self - &rhs
    }
}

impl Neg for PeriodicField {
    type Output = PeriodicField;

    fn neg(self) -> PeriodicField {
        self.scale(-1.0)
    }
}

impl Neg for &PeriodicField {
    type Output = PeriodicField;

    fn neg(self) -> PeriodicField {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &PeriodicField {
    type Output = PeriodicField;

    fn mul(self, a: f64) -> PeriodicField {
        self.scale(a)
    }
}

impl Mul<f64> for PeriodicField {
    type Output = PeriodicField;

    fn mul(self, a: f64) -> PeriodicField {
        self.scale(a)
    }
}

impl Mul<&PeriodicField> for &PeriodicField {
    type Output = PeriodicField;

    fn mul(self, rhs: &PeriodicField) -> PeriodicField {
        self.multiply(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::GaussLegendre;

    const N: usize = 64;

    fn field(f: impl Fn(f64) -> f64) -> PeriodicField {
        PeriodicField::from_fn(N, f).unwrap()
    }

    fn tp(x: f64) -> f64 {
        2.0 * PI * x
    }

    #[test]
    fn rejects_bad_grids() {
        assert_eq!(PeriodicField::zeros(8), Err(Error::InvalidGridSize(8)));
        assert_eq!(PeriodicField::zeros(48), Err(Error::InvalidGridSize(48)));
        assert!(matches!(
            PeriodicField::from_samples(vec![f64::NAN; 16]),
            Err(Error::NonFinite(0))
        ));
    }

    #[test]
    fn derivative_examples() {
        assert!(field(|_| 1.0).derivative().sup_norm() < 1e-14);
        let d = field(|x| tp(x).sin()).derivative();
        assert!(d.max_abs_diff(&field(|x| 2.0 * PI * tp(x).cos())) < 1e-12);
        let d = field(|x| (2.0 * tp(x)).cos()).derivative();
        assert!(d.max_abs_diff(&field(|x| -4.0 * PI * (2.0 * tp(x)).sin())) < 1e-12);
        assert!(field(|x| (3.0 + tp(x).sin()).exp()).derivative().mean().abs() < 1e-13);
    }

    #[test]
    fn mean_examples() {
        assert!((field(|_| 2.5).mean() - 2.5).abs() < 1e-15);
        assert!(field(|x| tp(x).sin()).mean().abs() < 1e-15);
        assert!((field(|x| 3.0 + tp(x).cos()).mean() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn multiply_examples() {
        let c = field(|x| tp(x).cos());
        let s = field(|x| tp(x).sin());
        assert_eq!(PeriodicField::zeros(N).unwrap().multiply(&c).sup_norm(), 0.0);
        assert!(c.multiply(&c).max_abs_diff(&field(|x| 0.5 * (1.0 + (2.0 * tp(x)).cos()))) < 1e-15);
        assert!(s.multiply(&c).max_abs_diff(&field(|x| 0.5 * (2.0 * tp(x)).sin())) < 1e-15);
        // mismatched grids are reconciled by resampling
        let c32 = PeriodicField::cos_mode(32, 1).unwrap();
        assert!(c32.multiply(&c).max_abs_diff(&c.multiply(&c)) < 1e-14);
    }

    #[test]
    fn dealiased_product_drops_folded_modes() {
        // cos(2 pi 20 x)^2 = (1 + cos(2 pi 40 x))/2; on 64 points mode 40 aliases onto 24.
        let f = PeriodicField::cos_mode(N, 20).unwrap();
        let plain = f.multiply(&f);
        let clean = f.multiply_dealiased(&f);
        assert!((clean.mean() - 0.5).abs() < 1e-14);
        assert!(clean.offset(-0.5).sup_norm() < 1e-13);
        assert!(plain.offset(-0.5).sup_norm() > 0.4);
        // low modes are untouched
        let c = field(|x| tp(x).cos());
        assert!(c.multiply_dealiased(&c).max_abs_diff(&c.multiply(&c)) < 1e-14);
    }

    #[test]
    fn inv_neg_dxx_examples() {
        assert_eq!(PeriodicField::zeros(N).unwrap().inv_neg_dxx().unwrap().sup_norm(), 0.0);
        let w = field(|x| tp(x).cos()).inv_neg_dxx().unwrap();
        let expected = field(|x| (tp(x).cos() - 1.0) / (4.0 * PI * PI));
        assert!(w.max_abs_diff(&expected) < 1e-15);
        assert!(matches!(field(|_| 1.0).inv_neg_dxx(), Err(Error::NonZeroMean { .. })));
    }

    #[test]
    fn inv_neg_dxx_matches_double_integral() {
        // w(x) = -int_0^x (x - z) f(z) dz + x int_0^1 (1 - z) f(z) dz
        let f_exact = |z: f64| tp(z).cos() - 0.4 * (3.0 * tp(z)).sin();
        let w = field(f_exact).inv_neg_dxx().unwrap();
        let gl = GaussLegendre::new(20);
        let tail = gl.integrate_composite(0.0, 1.0, 8, |z| (1.0 - z) * f_exact(z));
        for (j, x) in w.grid().enumerate() {
            let head = gl.integrate_composite(0.0, x.max(1e-300), 8, |z| (x - z) * f_exact(z));
            let oracle = -head + x * tail;
            assert!((w.samples()[j] - oracle).abs() < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn inv_mu_minus_dxx_examples() {
        let one = field(|_| 1.0);
        assert!(one.inv_mu_minus_dxx().max_abs_diff(&one) < 1e-15);
        let w = field(|x| tp(x).cos()).inv_mu_minus_dxx();
        assert!(w.max_abs_diff(&field(|x| tp(x).cos() / (4.0 * PI * PI))) < 1e-16);
    }

    #[test]
    fn inertia_round_trips() {
        let f = field(|x| 0.3 + tp(x).sin() - 0.2 * (2.0 * tp(x)).cos());
        let w = f.inv_mu_minus_dxx();
        let d = w.apply_inertia(InertiaOperatorKind::MuMinusDxx).max_abs_diff(&f);
        assert!(d < 1e-11, "{d}");
        let g = f.offset(-f.mean());
        let w = g.inv_neg_dxx().unwrap();
        assert!(w.value_at_zero().abs() < 1e-16);
        assert!(w.apply_inertia(InertiaOperatorKind::NegDxx).max_abs_diff(&g) < 1e-11);
    }

    #[test]
    fn compose_examples() {
        let s = field(|x| tp(x).sin());
        assert!(s.compose(&CircleDiffeo::identity(N).unwrap()).max_abs_diff(&s) < 1e-15);
        let rot = CircleDiffeo::rotation(N, 0.25).unwrap();
        assert!(s.compose(&rot).max_abs_diff(&field(|x| tp(x).cos())) < 1e-14);
        let phi = CircleDiffeo::from_displacement_fn(N, |x| 0.1 * tp(x).sin() / (2.0 * PI)).unwrap();
        let oracle = field(|x| (tp(x) + 0.1 * tp(x).sin()).sin());
        assert!(s.compose(&phi).max_abs_diff(&oracle) < 1e-13);
    }

    #[test]
    fn shift_and_interpolant() {
        let f = field(|x| tp(x).sin() + 0.5 * (3.0 * tp(x)).cos());
        let g = f.shift(0.137);
        assert!(g.max_abs_diff(&field(|x| tp(x - 0.137).sin() + 0.5 * (3.0 * tp(x - 0.137)).cos())) < 1e-13);
        let interp = f.interpolant();
        let x = 0.3141;
        assert!((interp.eval(x) - (tp(x).sin() + 0.5 * (3.0 * tp(x)).cos())).abs() < 1e-13);
        let d = 2.0 * PI * tp(x).cos() - 1.5 * 2.0 * PI * (3.0 * tp(x)).sin();
        assert!((interp.eval_derivative(x, 1) - d).abs() < 1e-11);
    }

    #[test]
    fn min_refined_finds_off_grid_minimum() {
        // minimum of cos(2 pi (x - 0.3017)) is at 0.8017, between grid points
        let f = field(|x| tp(x - 0.3017).cos());
        let (xm, fm) = f.min_refined();
        assert!((xm - 0.8017).abs() < 1e-9);
        assert!((fm + 1.0).abs() < 1e-14);
        assert!(f.min() > fm);
    }

    #[test]
    fn resample_preserves_band_limited_fields() {
        let f = field(|x| tp(x).sin() + (5.0 * tp(x)).cos());
        let up = f.resample(256);
        assert!(up.max_abs_diff(&PeriodicField::from_fn(256, |x| tp(x).sin() + (5.0 * tp(x)).cos()).unwrap()) < 1e-13);
        assert!(up.resample(N).max_abs_diff(&f) < 1e-13);
        // a Nyquist-carrying signal survives a round trip through a finer grid
        let nyq = PeriodicField::cos_mode(16, 8).unwrap();
        assert!(nyq.resample(32).resample(16).max_abs_diff(&nyq) < 1e-14);
    }

    #[test]
    fn antiderivative_inverts_derivative() {
        let f = field(|x| 0.7 + tp(x).sin() - (4.0 * tp(x)).cos());
        let p = f.antiderivative();
        assert!(p.value_at_zero().abs() < 1e-16);
        assert!(p.derivative().max_abs_diff(&f.offset(-f.mean())) < 1e-12);
    }

    #[test]
    fn serde_validates() {
        let f = field(|x| tp(x).sin());
        let v: Vec<f64> = f.clone().into();
        assert_eq!(PeriodicField::try_from(v).unwrap(), f);
        assert!(PeriodicField::try_from(vec![0.0; 10]).is_err());
    }
}
