//! Ground states: minimisers of the action on the Nehari manifold.
//!
//! Normalised gradient flow. Each step is backward Euler in the linear part,
//! `v ← (1/dτ + ω + Δ_α)^{-1} (v/dτ + |v|^{p-1} v)`, followed by the Nehari
//! rescale. A step is kept only if it does not raise the action; otherwise
//! `dτ` is halved.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functionals::{self, Sign};
use crate::operator::{apply_delta_alpha, resolvent, PointInteraction, ResolventWorkspace};
use crate::state::DecomposedState;

#[derive(Debug, Clone, PartialEq)]
pub struct GroundStateOptions {
    pub dtau: f64,
    pub dtau_max: f64,
    pub tol_resid: f64,
    pub tol_nehari: f64,
    pub max_iters: usize,
    /// Decomposition shift of the returned state; defaults to `max(1, 2|e_α|)`.
    pub lambda_ref: Option<f64>,
    /// Width of the Gaussian seed.
    pub seed_width: f64,
}

impl Default for GroundStateOptions {
    fn default() -> Self {
        Self {
            dtau: 0.1,
            dtau_max: 10.0,
            tol_resid: 1e-6,
            tol_nehari: 1e-8,
            max_iters: 20_000,
            lambda_ref: None,
            seed_width: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub action: f64,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct GroundStateReport {
    pub state: DecomposedState,
    pub omega: f64,
    pub p: f64,
    pub action_value: f64,
    /// Stationary residual relative to `‖v‖_{H¹_α}`.
    pub residual: f64,
    /// Nehari residual relative to `F + ω M`.
    pub nehari: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Accepted iterates only.
    pub log: Vec<IterationRecord>,
}

/// Default decomposition shift `max(1, 2|e_α|)`.
pub fn default_lambda_ref(model: &PointInteraction) -> f64 {
    let e = model.eigenvalue().map_or(model.continuum_bound_shift(), f64::abs);
    (2.0 * e).max(1.0)
}

fn power_term(u: &[Complex64], p: f64) -> Vec<Complex64> {
    u.iter().map(|v| v * v.norm().powf(p - 1.0)).collect()
}

/// `s·u` with `s = ((F + ωM)/‖u‖^{p+1}_{p+1})^{1/(p-1)}`, the point where the
/// ray through `u` meets the Nehari manifold.
pub fn nehari_rescale(state: &DecomposedState, omega: f64, p: f64) -> Result<DecomposedState> {
    let s = nehari_factor(state, omega, p)?;
    Ok(state.scaled(Complex64::new(s, 0.0)))
}

/// The factor `s` used by [`nehari_rescale`].
pub fn nehari_factor(state: &DecomposedState, omega: f64, p: f64) -> Result<f64> {
    let linear = functionals::quadratic_form(state)? + omega * state.mass();
    if !(linear > 0.0) {
        return Err(Error::RescaleUndefined(linear));
    }
    let l = state.lp_norm(p + 1.0).powf(p + 1.0);
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::RescaleUndefined(linear));
    }
    Ok((linear / l).powf(1.0 / (p - 1.0)))
}

/// `‖Δ_α v + ωv − |v|^{p−1}v‖_{L²}`.
pub fn stationary_residual(state: &DecomposedState, omega: f64, p: f64) -> Result<f64> {
    stationary_residual_with(state, omega, p, 1.0)
}

/// `‖Δ_α v + ωv − c |v|^{p−1}v‖_{L²}`; `c = 0` gives the linear eigen-residual.
pub fn stationary_residual_with(
    state: &DecomposedState,
    omega: f64,
    p: f64,
    coefficient: f64,
) -> Result<f64> {
    let hv = apply_delta_alpha(state)?;
    let v = state.total_field();
    let nl = power_term(&v, p);
    let r: Vec<Complex64> = hv
        .iter()
        .zip(&v)
        .zip(&nl)
        .map(|((h, x), n)| h + x * omega - n * coefficient)
        .collect();
    Ok(state.grid().norm_sq(&r).sqrt())
}

/// Gaussian seed `e^{-(r/σ)²}` with its charge fixed by the domain constraint
/// at `ws`.
pub fn gaussian_seed(ws: &Arc<ResolventWorkspace>, width: f64) -> Result<DecomposedState> {
    let phi = ws
        .grid()
        .sample(|r| Complex64::new((-(r / width).powi(2)).exp(), 0.0));
    DecomposedState::from_regular(phi, Arc::clone(ws))
}

struct Progress {
    residual: f64,
    nehari: f64,
}

fn measure(v: &DecomposedState, reference: &Arc<ResolventWorkspace>, omega: f64, p: f64) -> Result<Progress> {
    let h1 = v.change_lambda(reference)?.norms().h1_alpha;
    let residual = stationary_residual(v, omega, p)? / h1;
    let linear = functionals::quadratic_form(v)? + omega * v.mass();
    let nehari = functionals::nehari_residual(v, p, omega)?.abs() / linear;
    Ok(Progress { residual, nehari })
}

/// Ground state `v_ω` of the focusing equation.
pub fn solve_ground_state(
    model: &Arc<PointInteraction>,
    omega: f64,
    p: f64,
    options: &GroundStateOptions,
) -> Result<GroundStateReport> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::Parameter(format!("the power must satisfy p > 1, got {p}")));
    }
    let bound = model.eigenvalue().map_or(0.0, f64::abs);
    if !(omega > bound) {
        return Err(Error::Parameter(format!(
            "ground states need omega > |e_alpha| = {bound}, got {omega}"
        )));
    }
    if !(options.dtau > 0.0) {
        return Err(Error::Parameter(format!(
            "dtau must be positive, got {}",
            options.dtau
        )));
    }
    let lambda_ref = options.lambda_ref.unwrap_or_else(|| default_lambda_ref(model));
    let reference = model.workspace_real(lambda_ref)?;

    let mut dtau = options.dtau;
    let mut ws = model.workspace_real(1.0 / dtau + omega)?;
    let mut v = nehari_rescale(&gaussian_seed(&ws, options.seed_width)?, omega, p)?;
    let mut s = functionals::action(&v, p, Sign::Focusing, omega)?;
    let mut progress = measure(&v, &reference, omega, p)?;
    let mut log = vec![IterationRecord {
        iteration: 0,
        action: s,
        residual: progress.residual,
    }];
    let mut converged = progress.residual <= options.tol_resid && progress.nehari <= options.tol_nehari;
    let mut iterations = 0;

    while !converged && iterations < options.max_iters {
        iterations += 1;
        let shift = 1.0 / dtau + omega;
        if ws.real_shift() != Some(shift) {
            ws = model.workspace_real(shift)?;
        }
        let u = v.change_lambda(&ws)?.total_field();
        let nl = power_term(&u, p);
        let rhs: Vec<Complex64> = u.iter().zip(&nl).map(|(x, n)| x / dtau + n).collect();
        let candidate = nehari_rescale(&resolvent(&ws, &rhs)?, omega, p)?;
        let s_new = functionals::action(&candidate, p, Sign::Focusing, omega)?;
        if s_new <= s + 1e-13 * s.abs() {
            v = candidate;
            s = s_new;
            progress = measure(&v, &reference, omega, p)?;
            log.push(IterationRecord {
                iteration: iterations,
                action: s,
                residual: progress.residual,
            });
            converged = progress.residual <= options.tol_resid && progress.nehari <= options.tol_nehari;
            dtau = (dtau * 1.5).min(options.dtau_max);
        } else {
            dtau *= 0.5;
            if dtau < 1e-10 {
                break;
            }
        }
    }

    let mut state = v.change_lambda(&reference)?;
    if state.q.norm() > 0.0 {
        let phase = state.q.conj() / state.q.norm();
        state = state.scaled(phase);
    }
    let action_value = functionals::action(&state, p, Sign::Focusing, omega)?;
    Ok(GroundStateReport {
        state,
        omega,
        p,
        action_value,
        residual: progress.residual,
        nehari: progress.nehari,
        iterations,
        converged,
        log,
    })
}
