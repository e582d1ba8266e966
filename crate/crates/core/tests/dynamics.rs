use std::f64::consts::{PI, SQRT_2};

use hs2_core::christoffel::metric_id;
use hs2_core::dynamics::{
    eulerian_step, explicit_hs_geodesic, geodesic_energy, geodesic_step, hs_blowup_time, jacobi_step,
    lagrangian_eulerian_check, lagrangian_eulerian_gap, locate_chart_exit, shifted_solution_check, CoupledRun,
    EulerianState, GeodesicState, JacobiState,
};
use hs2_core::{EquationKind, Error, MetricConvention, PeriodicField, TangentPair};

fn tp(x: f64) -> f64 {
    2.0 * PI * x
}

fn field(n: usize, f: impl Fn(f64) -> f64) -> PeriodicField {
    PeriodicField::from_fn(n, f).unwrap()
}

fn reference_u0(n: usize) -> PeriodicField {
    PeriodicField::sin_mode(n, 1).unwrap().scale(SQRT_2 / PI)
}

#[test]
fn zero_velocity_only_advances_time() {
    for kind in EquationKind::ALL {
        let g = GeodesicState::from_identity(kind, TangentPair::zeros(64).unwrap()).unwrap();
        let next = geodesic_step(&g, 0.01).unwrap();
        assert_eq!(next.base, g.base);
        assert_eq!(next.velocity, g.velocity);
        assert!((next.t - 0.01).abs() < 1e-16);
    }
}

#[test]
fn constant_mu_velocity_rotates() {
    let c = 0.37;
    let mut g = GeodesicState::from_identity(
        EquationKind::MuHs,
        TangentPair::first_only(PeriodicField::constant(64, c).unwrap()),
    )
    .unwrap();
    for _ in 0..100 {
        g = geodesic_step(&g, 0.01).unwrap();
    }
    let expected = PeriodicField::constant(64, c * g.t).unwrap();
    assert!(g.base.phi.displacement().max_abs_diff(&expected) < 1e-13);
    assert!(g.base.f.sup_norm() == 0.0);
}

#[test]
fn rk4_tracks_explicit_geodesic() {
    let n = 128;
    let u0 = reference_u0(n);
    let t_star = hs_blowup_time(&u0).unwrap();
    let mut g = GeodesicState::from_identity(EquationKind::Hs, TangentPair::first_only(u0.clone())).unwrap();
    while g.t < 0.9 * t_star {
        g = geodesic_step(&g, 1e-3).unwrap();
        let exact = explicit_hs_geodesic(&u0, g.t).unwrap();
        assert!(g.base.phi.displacement().max_abs_diff(exact.displacement()) < 1e-6);
    }
}

#[test]
fn hs_energy_with_quarter_metric_is_one() {
    let n = 128;
    let u0 = reference_u0(n);
    let t_star = hs_blowup_time(&u0).unwrap();
    let conv = MetricConvention::quarter();
    let mut g = GeodesicState::from_identity(EquationKind::TwoHs, TangentPair::first_only(u0)).unwrap();
    while g.t < 0.9 * t_star {
        assert!((geodesic_energy(&g, conv) - 1.0).abs() < 1e-8);
        g = geodesic_step(&g, 1e-3).unwrap();
    }
}

#[test]
fn chart_exit_matches_formula() {
    let n = 128;
    let u0 = reference_u0(n);
    let g = GeodesicState::from_identity(EquationKind::Hs, TangentPair::first_only(u0.clone())).unwrap();
    let exit = locate_chart_exit(g, 1e-3, 2.0).unwrap();
    let t_star = hs_blowup_time(&u0).unwrap();
    assert!((exit.t_exit - t_star).abs() < 1e-3);
    assert!(exit.t_threshold < exit.t_exit);
    // the minimum slope sits where u0x is most negative
    assert!((exit.x_exit - 0.5).abs() < 1e-3);
}

#[test]
fn two_component_reductions_match_one_component_runs() {
    let n = 64;
    let u = field(n, |x| 0.3 * tp(x).sin() + 0.1 * (2.0 * tp(x)).sin());
    for (two, one) in [(EquationKind::TwoHs, EquationKind::Hs), (EquationKind::TwoMuHs, EquationKind::MuHs)] {
        let u = if one == EquationKind::MuHs { u.offset(0.2) } else { u.clone() };
        let mut a = GeodesicState::from_identity(two, TangentPair::first_only(u.clone())).unwrap();
        let mut b = GeodesicState::from_identity(one, TangentPair::first_only(u.clone())).unwrap();
        let zero = PeriodicField::zeros(n).unwrap();
        let mut ea = EulerianState::new(two, u.clone(), zero.clone(), 0.0).unwrap();
        let mut eb = EulerianState::new(one, u.clone(), zero, 0.0).unwrap();
        for _ in 0..100 {
            a = geodesic_step(&a, 2e-3).unwrap();
            b = geodesic_step(&b, 2e-3).unwrap();
            ea = eulerian_step(&ea, 2e-3, false).unwrap();
            eb = eulerian_step(&eb, 2e-3, false).unwrap();
        }
        assert!(a.base.phi.displacement().max_abs_diff(b.base.phi.displacement()) < 1e-10);
        assert!(a.velocity.max_abs_diff(&b.velocity) < 1e-10);
        assert!(ea.u.max_abs_diff(&eb.u) < 1e-10);
    }
}

#[test]
fn lagrangian_and_eulerian_agree() {
    let n = 128;
    let u0 = TangentPair::new(
        field(n, |x| 0.2 * tp(x).cos() + 0.1 * (2.0 * tp(x)).sin()),
        field(n, |x| 0.5 + 0.2 * tp(x).sin()),
    )
    .unwrap();
    let run = CoupledRun::new(EquationKind::TwoMuHs, u0.clone(), false).unwrap();
    assert!(run.gap().unwrap() < 1e-14);
    assert!(lagrangian_eulerian_check(EquationKind::TwoMuHs, &u0, 0.3, 1e-3).unwrap() < 1e-4);

    let mut dealiased = CoupledRun::new(EquationKind::TwoMuHs, u0, true).unwrap();
    for _ in 0..100 {
        dealiased.step(1e-3).unwrap();
    }
    assert!(lagrangian_eulerian_gap(&dealiased.lagrangian, &dealiased.eulerian).unwrap() < 1e-4);
}

#[test]
fn energy_is_conserved_for_all_kinds() {
    let n = 64;
    let conv = MetricConvention::default();
    for kind in EquationKind::ALL {
        let first = field(n, |x| 0.3 * tp(x).sin() - 0.1 * (2.0 * tp(x)).cos() + 0.1);
        let u0 = TangentPair::new(first, field(n, |x| 0.4 + 0.1 * tp(x).cos())).unwrap();
        let mut g = GeodesicState::from_identity(kind, u0).unwrap();
        let e0 = geodesic_energy(&g, conv);
        for _ in 0..500 {
            g = geodesic_step(&g, 1e-3).unwrap();
        }
        let drift = (geodesic_energy(&g, conv) - e0).abs() / e0;
        assert!(drift < 0.5e-8, "{kind}: {drift:e}");
    }
}

#[test]
fn eulerian_reports_cfl_and_chart_errors() {
    let n = 64;
    let u = field(n, |x| 5.0 * tp(x).sin());
    let s = EulerianState::new(EquationKind::Hs, u, PeriodicField::zeros(n).unwrap(), 0.0).unwrap();
    assert!(matches!(eulerian_step(&s, 0.01, false), Err(Error::CflViolation { .. })));
    let bad = EulerianState::new(EquationKind::TwoHs, field(n, |x| tp(x).cos()), PeriodicField::zeros(n).unwrap(), 0.0);
    assert!(matches!(bad, Err(Error::ChartViolation { .. })));
}

fn unit_two_hs_geodesic(n: usize) -> GeodesicState {
    let kind = EquationKind::TwoHs;
    let u0 = TangentPair::new(
        field(n, |x| 0.1 * tp(x).sin()),
        field(n, |x| 1.0 + 0.1 * (2.0 * tp(x)).cos()),
    )
    .unwrap();
    let u0 = u0.scale(1.0 / metric_id(kind, MetricConvention::default(), &u0, &u0).sqrt());
    GeodesicState::from_identity(kind, u0).unwrap()
}

#[test]
fn tangential_jacobi_field_follows_velocity() {
    let n = 64;
    let g = unit_two_hs_geodesic(n);
    let mut j = JacobiState::new(g.clone(), g.velocity.clone(), TangentPair::zeros(n).unwrap()).unwrap();
    for _ in 0..50 {
        j = jacobi_step(&j, 0.01).unwrap();
    }
    assert!(j.xi.max_abs_diff(&j.geodesic.velocity) < 1e-6);
}

#[test]
fn normal_jacobi_field_stays_bounded() {
    let n = 64;
    let conv = MetricConvention::default();
    let kind = EquationKind::TwoHs;
    let g = unit_two_hs_geodesic(n);
    let raw = TangentPair::new(field(n, |x| 0.2 * (2.0 * tp(x)).sin()), field(n, |x| tp(x).sin())).unwrap();
    let dxi0 = raw.axpy(-metric_id(kind, conv, &raw, &g.velocity), &g.velocity);
    let bound = 2.05 * 2.0 * metric_id(kind, conv, &dxi0, &dxi0).sqrt();
    let mut j = JacobiState::new(g, TangentPair::zeros(n).unwrap(), dxi0).unwrap();
    while j.geodesic.t < 2.5 {
        j = jacobi_step(&j, 0.02).unwrap();
        assert!(j.norm(conv) <= bound);
    }
}

#[test]
fn shifted_family_without_shift_is_the_base_residual() {
    let n = 64;
    let dt = 1e-3;
    let mut s = EulerianState::new(
        EquationKind::Hs,
        field(n, |x| 0.2 * tp(x).sin()),
        PeriodicField::zeros(n).unwrap(),
        0.0,
    )
    .unwrap();
    let mut series = vec![s.u.clone()];
    for _ in 0..60 {
        s = eulerian_step(&s, dt, false).unwrap();
        series.push(s.u.clone());
    }
    let base = shifted_solution_check(&series, dt, |_| 0.0, |_| 0.0);
    assert!(base < 1e-8);
    let shifted = shifted_solution_check(&series, dt, |t| 0.5 * t * t, |t| t);
    assert!(shifted < 1e-5);
}
