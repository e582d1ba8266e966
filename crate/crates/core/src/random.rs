//! Seeded random band-limited fields for ensembles and property checks.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::christoffel::EquationKind;
use crate::error::{Error, Result};
use crate::field::PeriodicField;
use crate::group::TangentPair;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `a₀ + Σ_{k=1..kmax} (a_k cos 2πkx + b_k sin 2πkx) / (1 + k²)` with
/// coefficients uniform in `[-1, 1]`.
pub fn random_field(rng: &mut impl Rng, n: usize, kmax: usize) -> Result<PeriodicField> {
    if kmax == 0 || 2 * kmax >= n {
        return Err(Error::InvalidArgument(format!("kmax = {kmax} must lie in 1..{}", n / 2)));
    }
    let a0: f64 = rng.gen_range(-1.0..1.0);
    let coeffs: Vec<(f64, f64)> = (1..=kmax)
        .map(|k| {
            let damp = 1.0 / (1.0 + (k * k) as f64);
            (rng.gen_range(-1.0..1.0) * damp, rng.gen_range(-1.0..1.0) * damp)
        })
        .collect();
    PeriodicField::from_fn(n, |x| {
        coeffs.iter().enumerate().fold(a0, |acc, (i, (a, b))| {
            let arg = 2.0 * PI * (i + 1) as f64 * x;
            acc + a * arg.cos() + b * arg.sin()
        })
    })
}

/// Random tangent pair admissible for `kind`: the first component vanishes at
/// zero for chart-constrained equations and the second is zero for
/// one-component equations.
pub fn random_tangent(rng: &mut impl Rng, kind: EquationKind, n: usize, kmax: usize) -> Result<TangentPair> {
    let mut first = random_field(rng, n, kmax)?;
    if kind.chart_constrained() {
        first = first.offset(-first.value_at_zero());
    }
    let second = if kind.is_two_component() {
        random_field(rng, n, kmax)?
    } else {
        PeriodicField::zeros(n)?
    };
    TangentPair::new(first, second)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_admissible() {
        let a = random_tangent(&mut seeded_rng(7), EquationKind::TwoHs, 64, 6).unwrap();
        let b = random_tangent(&mut seeded_rng(7), EquationKind::TwoHs, 64, 6).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.first.value_at_zero(), 0.0);
        let spec = a.second.spectrum();
        assert!(spec[7..57].iter().all(|c| c.norm() < 1e-15));
        let h = random_tangent(&mut seeded_rng(7), EquationKind::Hs, 64, 3).unwrap();
        assert!(h.second.sup_norm() == 0.0);
        assert!(random_field(&mut seeded_rng(1), 16, 8).is_err());
    }
}
