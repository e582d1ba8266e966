use hs2_core::christoffel::{christoffel_at, christoffel_id, christoffel_pullback, metric, metric_id};
use hs2_core::curvature::{curvature_tensor, sectional_curvature, sectional_curvature_2muhs_formula};
use hs2_core::group::adjoint;
use hs2_core::random::{random_field, random_tangent, seeded_rng};
use hs2_core::{CircleDiffeo, EquationKind, GroupElement, MetricConvention, PeriodicField, TangentPair};
use proptest::prelude::*;

const N: usize = 128;

fn kind_strategy() -> impl Strategy<Value = EquationKind> {
    prop::sample::select(EquationKind::ALL.to_vec())
}

fn tangents(kind: EquationKind, seed: u64, count: usize) -> Vec<TangentPair> {
    let mut rng = seeded_rng(seed);
    (0..count).map(|_| random_tangent(&mut rng, kind, N, 6).unwrap()).collect()
}

fn element(seed: u64, amplitude: f64, fix_base_point: bool) -> GroupElement {
    let mut rng = seeded_rng(seed);
    let mut v = random_field(&mut rng, N, 4).unwrap();
    v = v.offset(-if fix_base_point { v.value_at_zero() } else { v.mean() });
    let scale = amplitude / v.derivative().sup_norm();
    GroupElement::new(CircleDiffeo::new(v.scale(scale)).unwrap(), random_field(&mut rng, N, 4).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn antiderivative_inverts_derivative(seed in any::<u64>()) {
        let f = random_field(&mut seeded_rng(seed), N, 6).unwrap();
        let g = f.antiderivative().derivative();
        prop_assert!(g.max_abs_diff(&f.offset(-f.mean())) < 1e-12);
    }

    #[test]
    fn inverse_operators_invert(seed in any::<u64>()) {
        let f = random_field(&mut seeded_rng(seed), N, 6).unwrap();
        let zero_mean = f.offset(-f.mean());
        let w = zero_mean.inv_neg_dxx().unwrap();
        prop_assert_eq!(w.value_at_zero(), 0.0);
        prop_assert!((&w.derivative().derivative() + &zero_mean).sup_norm() < 1e-10);
        let w = f.inv_mu_minus_dxx();
        prop_assert!((&(-w.derivative().derivative()).offset(w.mean()) - &f).sup_norm() < 1e-10);
    }

    #[test]
    fn shifts_compose(seed in any::<u64>(), a in -1.0f64..1.0, b in -1.0f64..1.0) {
        let f = random_field(&mut seeded_rng(seed), N, 6).unwrap();
        prop_assert!(f.shift(a).shift(b).max_abs_diff(&f.shift(a + b)) < 1e-13);
        let rot = CircleDiffeo::rotation(N, -a).unwrap();
        prop_assert!(f.compose(&rot).max_abs_diff(&f.shift(a)) < 1e-12);
    }

    #[test]
    fn diffeo_inverse_round_trip(seed in any::<u64>(), amp in 0.05f64..0.9) {
        let g = element(seed, amp, false);
        let inv = g.phi.inverse().unwrap();
        let id = g.phi.compose(&inv).unwrap();
        prop_assert!(id.displacement().sup_norm() < 1e-10);
    }

    #[test]
    fn adjoint_is_multiplicative(seed in any::<u64>()) {
        let a = element(seed, 0.3, false);
        let b = element(seed.wrapping_add(1), 0.3, false);
        let s = tangents(EquationKind::TwoMuHs, seed, 1).remove(0);
        let lhs = adjoint(&a.product(&b).unwrap(), &s).unwrap();
        let rhs = adjoint(&a, &adjoint(&b, &s).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-9 * (1.0 + lhs.sup_norm()));
    }

    #[test]
    fn christoffel_symmetric_and_bilinear(kind in kind_strategy(), seed in any::<u64>(), a in -2.0f64..2.0) {
        let t = tangents(kind, seed, 3);
        let g = |x: &TangentPair, y: &TangentPair| christoffel_id(kind, x, y).unwrap();
        let xy = g(&t[0], &t[1]);
        prop_assert!(xy.max_abs_diff(&g(&t[1], &t[0])) < 1e-12 * (1.0 + xy.sup_norm()));
        let lhs = g(&t[0].axpy(a, &t[2]), &t[1]);
        let rhs = xy.axpy(a, &g(&t[2], &t[1]));
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12 * (1.0 + rhs.sup_norm()));
    }

    #[test]
    fn pullback_equals_conjugation(kind in kind_strategy(), seed in any::<u64>()) {
        // conjugation composes with φ⁻¹, which is resolved on the grid only for mild deformations
        let base = element(seed, 0.15, true);
        let t = tangents(kind, seed ^ 7, 2);
        let a = christoffel_at(kind, &base, &t[0], &t[1]).unwrap();
        let b = christoffel_pullback(kind, &base, &t[0], &t[1]).unwrap();
        prop_assert!(a.max_abs_diff(&b) < 1e-9 * (1.0 + a.sup_norm()));
    }

    #[test]
    fn metric_is_right_invariant(kind in kind_strategy(), seed in any::<u64>()) {
        let base = element(seed, 0.4, true);
        let t = tangents(kind, seed ^ 3, 2);
        let conv = MetricConvention::default();
        let at_base = metric(kind, conv, &base, &t[0].compose(&base.phi), &t[1].compose(&base.phi));
        let at_id = metric_id(kind, conv, &t[0], &t[1]);
        prop_assert!((at_base - at_id).abs() < 1e-9 * (1.0 + at_id.abs()));
    }

    #[test]
    fn curvature_antisymmetric(kind in kind_strategy(), seed in any::<u64>()) {
        let t = tangents(kind, seed, 3);
        let a = curvature_tensor(kind, &t[0], &t[1], &t[2]).unwrap();
        let b = curvature_tensor(kind, &t[1], &t[0], &t[2]).unwrap();
        prop_assert!((&a + &b).sup_norm() < 1e-12 * (1.0 + a.sup_norm()));
    }

    #[test]
    fn sectional_curvature_scaling(kind in kind_strategy(), seed in any::<u64>(), a in 0.2f64..5.0, b in -5.0f64..-0.2) {
        let conv = MetricConvention::default();
        let t = tangents(kind, seed, 2);
        let base = sectional_curvature(kind, conv, &t[0], &t[1]).unwrap();
        let scaled = sectional_curvature(kind, conv, &t[0].scale(a), &t[1].scale(b)).unwrap();
        let expected = a * a * b * b * base.unnormalized;
        prop_assert!((scaled.unnormalized - expected).abs() < 1e-10 * expected.abs());
        let (s0, s1) = (base.normalized_value().unwrap(), scaled.normalized_value().unwrap());
        prop_assert!((s0 - s1).abs() < 1e-9 * s0.abs().max(1e-300));
    }

    #[test]
    fn two_hs_curvature_is_a_quarter(seed in any::<u64>()) {
        let t = tangents(EquationKind::TwoHs, seed, 2);
        let s = sectional_curvature(EquationKind::TwoHs, MetricConvention::default(), &t[0], &t[1]).unwrap();
        prop_assert!((s.normalized_value().unwrap() - 0.25).abs() < 1e-6);
    }

    #[test]
    fn two_muhs_routes_agree(seed in any::<u64>()) {
        let t = tangents(EquationKind::TwoMuHs, seed, 2);
        let s = sectional_curvature(EquationKind::TwoMuHs, MetricConvention::default(), &t[0], &t[1]).unwrap();
        prop_assert!((s.unnormalized - sectional_curvature_2muhs_formula(&t[0], &t[1])).abs() < 1e-8);
    }

    #[test]
    fn two_muhs_formula_vanishes_on_diagonal(seed in any::<u64>()) {
        let u = tangents(EquationKind::TwoMuHs, seed, 1).remove(0);
        prop_assert!(sectional_curvature_2muhs_formula(&u, &u).abs() < 1e-9);
    }
}

#[test]
fn grid_mismatch_rejected() {
    let a = PeriodicField::zeros(32).unwrap();
    let b = PeriodicField::zeros(64).unwrap();
    assert!(TangentPair::new(a, b).is_err());
}

#[test]
fn pullback_matches_refined_conjugation_under_strong_deformation() {
    let n = 128;
    let fine = 1024;
    let base = element(11, 0.8, true);
    let t = tangents(EquationKind::TwoHs, 12, 2);
    let pull = christoffel_pullback(EquationKind::TwoHs, &base, &t[0], &t[1]).unwrap();
    let up = |p: &TangentPair| TangentPair::new(p.first.resample(fine), p.second.resample(fine)).unwrap();
    let fine_base = GroupElement::new(
        CircleDiffeo::new(base.phi.displacement().resample(fine)).unwrap(),
        base.f.resample(fine),
    )
    .unwrap();
    let conj = christoffel_at(EquationKind::TwoHs, &fine_base, &up(&t[0]), &up(&t[1])).unwrap();
    let stride = fine / n;
    let worst = (0..n)
        .map(|j| {
            (pull.first.samples()[j] - conj.first.samples()[j * stride])
                .abs()
                .max((pull.second.samples()[j] - conj.second.samples()[j * stride]).abs())
        })
        .fold(0.0, f64::max);
    assert!(worst < 1e-7, "{worst:e}");
}
