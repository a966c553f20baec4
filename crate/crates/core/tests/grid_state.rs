mod common;

use std::f64::consts::PI;
use std::sync::Arc;

use common::{c, gaussian, l2_diff, model, rel};
use num_complex::Complex64;
use pointnls::snapshot::Snapshot;
use pointnls::specfun::{green_value, GreenParams};
use pointnls::{DecomposedState, RadialGrid};

#[test]
fn quadrature_of_constant_is_disc_area() {
    for &n in &[8, 64, 1000] {
        let g = RadialGrid::new(n, 1.0).unwrap();
        let area = g.quadrature(&vec![1.0; n]).unwrap();
        assert!(
            (area - PI).abs() <= 1e-12 + g.spacing().powi(2),
            "n = {n}: {area}"
        );
    }
}

#[test]
fn quadrature_of_gaussian() {
    let g = RadialGrid::new(4096, 8.0).unwrap();
    let v: Vec<f64> = g.nodes().iter().map(|r| (-r * r).exp()).collect();
    assert!((g.quadrature(&v).unwrap() - PI).abs() < 1e-6);
}

#[test]
fn quadrature_is_second_order() {
    let f = |r: f64| (-r * r).exp() * (2.0 * r).cos();
    let want = common::radial_integral(f, 1e-12, 10.0);
    let err = |n: usize| {
        let g = RadialGrid::new(n, 10.0).unwrap();
        (g.integrate(|_, r| f(r)) - want).abs()
    };
    let ratio = err(200) / err(400);
    assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn sampled_green_function_has_the_right_mass() {
    let g = RadialGrid::new(4096, 40.0).unwrap();
    let p = GreenParams::real(0.0, 1.0).unwrap();
    let v: Vec<f64> = g
        .nodes()
        .iter()
        .map(|&r| green_value(&p, r).unwrap().re.powi(2))
        .collect();
    let mass = g.quadrature(&v).unwrap();
    assert!((mass - 1.0 / (4.0 * PI)).abs() < 1e-3, "{mass}");
}

#[test]
fn total_field_is_regular_part_plus_charge() {
    let m = model(512, 20.0, 0.2);
    let ws = m.workspace_real(2.0).unwrap();
    let grid = m.grid();
    let phi = gaussian(grid, 1.0, 1.0);
    let regular = DecomposedState::new(phi.clone(), c(0.0), Arc::clone(&ws)).unwrap();
    assert_eq!(regular.total_field(), phi);
    let zero = vec![Complex64::default(); grid.n_points()];
    let charge = DecomposedState::new(zero, c(1.0), Arc::clone(&ws)).unwrap();
    assert_eq!(charge.total_field(), ws.green().to_vec());
    // the lattice Green function converges to the continuum one
    let p = GreenParams::real(0.2, 2.0).unwrap();
    let cont = grid.sample(|r| green_value(&p, r).unwrap());
    assert!(l2_diff(grid, ws.green(), &cont) < 1e-2 * grid.norm_sq(&cont).sqrt());
}

#[test]
fn total_field_is_linear() {
    let m = model(256, 10.0, 0.0);
    let ws = m.workspace_real(3.0).unwrap();
    let grid = m.grid();
    let a = DecomposedState::new(
        gaussian(grid, 1.0, 1.0),
        Complex64::new(0.3, -0.2),
        Arc::clone(&ws),
    )
    .unwrap();
    let b = DecomposedState::new(
        gaussian(grid, -2.0, 0.5),
        Complex64::new(1.1, 0.4),
        Arc::clone(&ws),
    )
    .unwrap();
    let (x, y) = (Complex64::new(0.7, 1.3), Complex64::new(-2.0, 0.1));
    let lhs = a.combine(x, &b, y).unwrap().total_field();
    let rhs: Vec<Complex64> = a
        .total_field()
        .iter()
        .zip(b.total_field())
        .map(|(u, v)| x * u + y * v)
        .collect();
    assert!(l2_diff(grid, &lhs, &rhs) < 1e-13);
}

#[test]
fn change_lambda_keeps_the_function() {
    let m = model(1024, 20.0, 0.0);
    let ws1 = m.workspace_real(2.0).unwrap();
    let ws2 = m.workspace_real(5.0).unwrap();
    let u = gaussian(m.grid(), 1.0, 1.5);
    let s = DecomposedState::from_total_field(&u, Arc::clone(&ws1)).unwrap();
    let t = s.change_lambda(&ws2).unwrap();
    let scale = m.grid().norm_sq(&u).sqrt();
    assert!(l2_diff(m.grid(), &s.total_field(), &t.total_field()) <= 1e-12 * scale);
    assert_eq!(t.q, s.q);
    assert!(s.constraint_defect() < 1e-6);
    assert!(t.constraint_defect() < 1e-6);
    let back = t.change_lambda(&ws1).unwrap();
    assert!(l2_diff(m.grid(), &back.phi, &s.phi) <= 1e-12 * scale);
}

#[test]
fn change_lambda_needs_the_same_operator() {
    let a = model(64, 5.0, 0.0);
    let b = model(64, 5.0, 0.0);
    let s = DecomposedState::zero(a.workspace_real(2.0).unwrap());
    assert!(s.change_lambda(&b.workspace_real(3.0).unwrap()).is_err());
}

#[test]
fn origin_extrapolation() {
    let g = RadialGrid::new(128, 1.0).unwrap();
    let exact = g.phi_at_origin(&g.sample(|r| c(1.0 - r * r))).unwrap();
    assert!((exact - c(1.0)).norm() < 1e-14);
    let g = RadialGrid::new(1024, 8.0).unwrap();
    assert!((g.phi_at_origin(&g.sample(|r| c((-r * r).exp()))).unwrap() - c(1.0)).norm() < 1e-4);
    assert!((g.phi_at_origin(&g.sample(|r| c(r.cos()))).unwrap() - c(1.0)).norm() < 1e-4);
}

#[test]
fn norms_of_simple_states() {
    let m = model(4096, 40.0, 0.0);
    let ws = m.workspace_real(1.0).unwrap();
    let zero = DecomposedState::zero(Arc::clone(&ws));
    let n = zero.norms();
    assert_eq!((n.mass, n.h1_phi, n.h1_alpha), (0.0, 0.0, 0.0));
    let phi = vec![Complex64::default(); m.grid().n_points()];
    let charge = DecomposedState::new(phi, c(1.0), ws).unwrap();
    assert!((charge.mass() - 1.0 / (4.0 * PI)).abs() < 1e-3);
    assert_eq!(charge.norms().h1_alpha, 1.0);
}

#[test]
fn sampled_green_function_is_not_in_h1() {
    // ‖G‖²_{H¹} on a grid of spacing h grows like log(1/h)/(2π)
    let p = GreenParams::real(0.0, 1.0).unwrap();
    let mut pts = Vec::new();
    for &n in &[512usize, 1024, 2048, 4096, 8192] {
        let g = RadialGrid::new(n, 20.0).unwrap();
        let v = g.sample(|r| green_value(&p, r).unwrap());
        let h1 = pointnls::inequality::h1_norm(&g, &v);
        pts.push(((1.0 / g.spacing()).ln(), h1 * h1));
    }
    let slope = (pts[4].1 - pts[0].1) / (pts[4].0 - pts[0].0);
    assert!(rel(slope, 1.0 / (2.0 * PI)) < 0.1, "slope {slope}");
}

#[test]
fn snapshot_round_trip_is_exact() {
    let m = model(300, 12.0, 0.4);
    let ws = m.workspace_real(2.5).unwrap();
    let phi = m
        .grid()
        .sample(|r| Complex64::new((-r).exp() / 3.0, (r * 0.7).sin() * 1e-3));
    let s = DecomposedState::new(phi, Complex64::new(0.1234567890123, -1.0 / 7.0), ws).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    Snapshot::from_state(&s, Some(3.0)).unwrap().write(&path).unwrap();
    let back = Snapshot::read(&path).unwrap();
    let restored = back.to_state(&m).unwrap();
    assert_eq!(restored.q, s.q);
    assert_eq!(restored.phi, s.phi);
    assert_eq!(restored.lambda(), s.lambda());
    assert_eq!(back.p, Some(3.0));
    assert!(back.to_state(&model(300, 12.0, 0.0)).is_err());
    assert!(back.to_state(&model(301, 12.0, 0.4)).is_err());
}
