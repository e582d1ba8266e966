//! Analytic curvature expansion against the finite-difference conjugation route.

use hs2_core::curvature::{curvature_tensor, curvature_tensor_fd, sectional_curvature_fd, FD_STEP};
use hs2_core::random::{random_tangent, seeded_rng};
use hs2_core::{EquationKind, MetricConvention};

#[test]
fn fd_route_matches_on_fifty_triples_per_kind() {
    let n = 256;
    for kind in EquationKind::ALL {
        let mut rng = seeded_rng(42 + kind as u64);
        let mut worst: f64 = 0.0;
        for _ in 0..50 {
            let u = random_tangent(&mut rng, kind, n, 6).unwrap();
            let v = random_tangent(&mut rng, kind, n, 6).unwrap();
            let w = random_tangent(&mut rng, kind, n, 6).unwrap();
            let a = curvature_tensor(kind, &u, &v, &w).unwrap();
            let b = curvature_tensor_fd(kind, &u, &v, &w, FD_STEP).unwrap();
            worst = worst.max(a.max_abs_diff(&b));
        }
        assert!(worst < 5e-6, "{kind}: {worst:e}");
    }
}

#[test]
fn fd_route_is_antisymmetric_and_reproduces_quarter() {
    let n = 128;
    let kind = EquationKind::TwoHs;
    let mut rng = seeded_rng(9);
    let u = random_tangent(&mut rng, kind, n, 4).unwrap();
    let v = random_tangent(&mut rng, kind, n, 4).unwrap();
    let w = random_tangent(&mut rng, kind, n, 4).unwrap();
    let a = curvature_tensor_fd(kind, &u, &v, &w, FD_STEP).unwrap();
    let b = curvature_tensor_fd(kind, &v, &u, &w, FD_STEP).unwrap();
    assert!((&a + &b).sup_norm() < 5e-6);
    let s = sectional_curvature_fd(kind, MetricConvention::default(), &u, &v, FD_STEP).unwrap();
    assert!((s.normalized_value().unwrap() - 0.25).abs() < 1e-6);
}
