mod common;

use std::f64::consts::PI;
use std::sync::Arc;

use common::{c, gaussian, model, radial_integral, rel};
use num_complex::Complex64;
use pointnls::functionals::*;
use pointnls::ground_state::nehari_rescale;
use pointnls::specfun::{gamma_coeff, green_value, GreenParams};
use pointnls::{apply_delta_alpha, DecomposedState, Error, PointInteraction, Sign};

fn sample_state(m: &Arc<PointInteraction>, lambda: f64) -> DecomposedState {
    let ws = m.workspace_real(lambda).unwrap();
    let u = m.grid().sample(|r| {
        Complex64::new(
            (-r * r).exp() + 0.3 * (-(r - 2.0).powi(2)).exp(),
            0.2 * r * (-r).exp(),
        )
    });
    DecomposedState::from_total_field(&u, ws).unwrap()
}

#[test]
fn chargeless_form_is_dirichlet_energy() {
    let m = model(2048, 12.0, 0.0);
    let ws = m.workspace_real(2.0).unwrap();
    let phi = gaussian(m.grid(), 1.0, 1.0);
    let s = DecomposedState::new(phi.clone(), c(0.0), ws).unwrap();
    let f = quadratic_form(&s).unwrap();
    assert_eq!(f, m.grid().dirichlet_energy(&phi));
    // ∫|∇e^{−r²}|² = π
    assert!((f - PI).abs() < 1e-4, "{f}");
}

#[test]
fn form_is_the_operator_pairing() {
    for &alpha in &[0.0, 0.15, 0.4] {
        let m = model(1024, 20.0, alpha);
        let s = sample_state(&m, 3.0);
        let pairing = m.grid().inner(&s.total_field(), &apply_delta_alpha(&s).unwrap());
        let f = quadratic_form(&s).unwrap();
        assert!((pairing.re - f).abs() <= 1e-10 * f.abs().max(1.0));
        assert!(pairing.im.abs() < 1e-10);
    }
}

#[test]
fn functionals_do_not_depend_on_the_shift() {
    let m = model(2048, 20.0, 0.1);
    let base = sample_state(&m, 2.0);
    let want = report(&base, 3.0, Sign::Focusing, 1.5, ActionConvention::Half).unwrap();
    for &lambda in &[m.eigenvalue().unwrap().abs() * 1.5, 5.0, 20.0] {
        let s = base.change_lambda_to(c(lambda)).unwrap();
        let got = report(&s, 3.0, Sign::Focusing, 1.5, ActionConvention::Half).unwrap();
        for (a, b) in [
            (got.quadratic_form, want.quadratic_form),
            (got.energy, want.energy),
            (got.pohozaev, want.pohozaev),
            (got.mass, want.mass),
        ] {
            assert!(
                (a - b).abs() <= 1e-4 * b.abs().max(1.0),
                "lambda {lambda}: {a} vs {b}"
            );
        }
        assert_eq!(got.lambda_used, lambda);
    }
}

#[test]
fn converges_to_continuum_functionals() {
    // u = e^{−r²} + q G^λ with q = φ(0)/Γ^λ, a continuum domain element
    let (alpha, lambda, p) = (0.2, 2.0, 3.0);
    let gp = GreenParams::real(alpha, lambda).unwrap();
    let gamma = gamma_coeff(alpha, c(lambda)).unwrap().re;
    let q = 1.0 / gamma;
    let phi = |r: f64| (-r * r).exp();
    let u = |r: f64| phi(r) + q * green_value(&gp, r).unwrap().re;
    let grad = radial_integral(|r| (2.0 * r * phi(r)).powi(2), 1e-12, 20.0);
    let m_phi = radial_integral(|r| phi(r).powi(2), 1e-12, 20.0);
    let m_u = radial_integral(|r| u(r).powi(2), 1e-14, 40.0);
    let l = radial_integral(|r| u(r).abs().powf(p + 1.0), 1e-14, 40.0);
    let f = grad + lambda * (m_phi - m_u) + gamma * q * q;
    let e = f / 2.0 - l / (p + 1.0);
    let pz = f - (p - 1.0) / (p + 1.0) * l + q * q / (4.0 * PI);
    let errors: Vec<[f64; 3]> = [2048usize, 4096, 8192]
        .iter()
        .map(|&n| {
            let m = model(n, 40.0, alpha);
            let ws = m.workspace_real(lambda).unwrap();
            let s = DecomposedState::new(m.grid().sample(|r| c(phi(r))), c(q), ws).unwrap();
            let r = report(&s, p, Sign::Focusing, 1.0, ActionConvention::Half).unwrap();
            [
                (r.quadratic_form - f).abs(),
                (r.energy - e).abs(),
                (r.pohozaev - pz).abs(),
            ]
        })
        .collect();
    let ratio = errors[1][0] / errors[2][0];
    assert!((3.0..5.0).contains(&ratio), "F ratio {ratio}");
    assert!(errors[2][0] < 1e-4);
    // the L^{p+1} part sees the logarithm at the origin and converges more slowly
    for (mid, fine) in errors[1].iter().zip(&errors[2]).skip(1) {
        assert!(mid / fine > 2.0);
        assert!(*fine < 2e-3);
    }
}

#[test]
fn energy_sign_split() {
    let m = model(1024, 20.0, 0.0);
    let s = sample_state(&m, 2.0);
    let f = quadratic_form(&s).unwrap();
    let l = s.lp_norm(4.0).powi(4);
    let foc = energy(&s, 3.0, Sign::Focusing).unwrap();
    let def = energy(&s, 3.0, Sign::Defocusing).unwrap();
    assert!(def >= f / 2.0 && foc <= f / 2.0);
    assert!((def - foc - 2.0 * l / 4.0).abs() < 1e-12 * l);
}

#[test]
fn action_on_the_nehari_manifold() {
    let m = model(2048, 20.0, 0.0);
    for &(omega, p) in &[(2.0, 3.0), (1.0, 5.0), (3.0, 2.5)] {
        let s = nehari_rescale(&sample_state(&m, 3.0), omega, p).unwrap();
        assert!(nehari_residual(&s, p, omega).unwrap().abs() < 1e-10);
        let l = s.lp_norm(p + 1.0).powf(p + 1.0);
        let action = action(&s, p, Sign::Focusing, omega).unwrap();
        assert!((action - (0.5 - 1.0 / (p + 1.0)) * l).abs() < 1e-10 * l);
    }
}

#[test]
fn phase_invariance() {
    let m = model(1024, 20.0, 0.3);
    let s = sample_state(&m, 2.0);
    let t = s.scaled(Complex64::from_polar(1.0, PI / 3.0));
    let a = report(&s, 4.0, Sign::Focusing, 2.0, ActionConvention::Half).unwrap();
    let b = report(&t, 4.0, Sign::Focusing, 2.0, ActionConvention::Half).unwrap();
    for (x, y) in [
        (a.mass, b.mass),
        (a.quadratic_form, b.quadratic_form),
        (a.energy, b.energy),
        (a.action, b.action),
        (a.pohozaev, b.pohozaev),
    ] {
        assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
    }
}

#[test]
fn pohozaev_energy_identity() {
    // P = 2E + (3 − p)/(p + 1) L + |q|²/4π in the focusing case
    let m = model(1024, 20.0, 0.1);
    let s = sample_state(&m, 2.0);
    for &p in &[2.0, 3.0, 4.5] {
        let e = energy(&s, p, Sign::Focusing).unwrap();
        let l = s.lp_norm(p + 1.0).powf(p + 1.0);
        let want = 2.0 * e + (3.0 - p) / (p + 1.0) * l + s.q.norm_sqr() / (4.0 * PI);
        assert!((pohozaev(&s, p).unwrap() - want).abs() < 1e-12 * want.abs().max(1.0));
    }
}

#[test]
fn report_agrees_with_the_single_functionals() {
    let m = model(512, 15.0, 0.0);
    let s = sample_state(&m, 2.5);
    let r = report(&s, 3.0, Sign::Defocusing, 1.2, ActionConvention::Full).unwrap();
    assert_eq!(r.mass, s.mass());
    assert!(rel(r.energy, energy(&s, 3.0, Sign::Defocusing).unwrap()) < 1e-14);
    let full = action_with(&s, 3.0, Sign::Defocusing, 1.2, ActionConvention::Full).unwrap();
    assert!(rel(r.action, full) < 1e-14);
    let half = action(&s, 3.0, Sign::Defocusing, 1.2).unwrap();
    assert!((full - half - 0.6 * s.mass()).abs() < 1e-12);
    assert!(rel(r.pohozaev, pohozaev(&s, 3.0).unwrap()) < 1e-14);
}

#[test]
fn invalid_arguments() {
    let m = model(512, 15.0, 0.0);
    let s = sample_state(&m, 2.0);
    assert!(matches!(
        energy(&s, 1.0, Sign::Focusing),
        Err(Error::Parameter(_))
    ));
    assert!(matches!(pohozaev(&s, f64::NAN), Err(Error::Parameter(_))));
    let e = m.eigenvalue().unwrap().abs();
    let below = m.workspace_real(0.5 * e).unwrap();
    let t = DecomposedState::new(s.phi.clone(), s.q, below).unwrap();
    assert!(matches!(quadratic_form(&t), Err(Error::ShiftTooSmall { .. })));
    let complex = s.change_lambda_to(Complex64::new(2.0, 1.0)).unwrap();
    assert!(matches!(quadratic_form(&complex), Err(Error::Parameter(_))));
}
