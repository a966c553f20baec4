//! Mass, quadratic form, energy, action, Pohozaev functional and Nehari
//! residual of a decomposed state.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::DecomposedState;

/// Sign of the power nonlinearity in `i∂_t u = Δ_α u ± |u|^{p-1} u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    /// The minus sign.
    Focusing,
    /// The plus sign.
    Defocusing,
}

impl Sign {
    /// Coefficient `s` of `s |u|^{p-1} u` on the right-hand side.
    pub fn coefficient(self) -> f64 {
        match self {
            Sign::Focusing => -1.0,
            Sign::Defocusing => 1.0,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Focusing => "focusing",
            Sign::Defocusing => "defocusing",
        })
    }
}

impl FromStr for Sign {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "focusing" => Ok(Sign::Focusing),
            "defocusing" => Ok(Sign::Defocusing),
            other => Err(format!("sign must be focusing or defocusing, got {other:?}")),
        }
    }
}

/// Weight of the mass in the action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionConvention {
    /// `S_ω = E + (ω/2) M`.
    #[default]
    Half,
    /// `S_ω = E + ω M`.
    Full,
}

impl ActionConvention {
    fn mass_weight(self) -> f64 {
        match self {
            ActionConvention::Half => 0.5,
            ActionConvention::Full => 1.0,
        }
    }
}

impl fmt::Display for ActionConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ActionConvention::Half => "half",
            ActionConvention::Full => "full",
        })
    }
}

impl FromStr for ActionConvention {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "half" => Ok(ActionConvention::Half),
            "full" => Ok(ActionConvention::Full),
            other => Err(format!("action_convention must be half or full, got {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FunctionalReport {
    pub mass: f64,
    pub quadratic_form: f64,
    pub energy: f64,
    pub action: f64,
    pub pohozaev: f64,
    pub nehari: f64,
    /// `‖u‖^{p+1}_{L^{p+1}}`.
    pub lp1: f64,
    pub lambda_used: f64,
    pub p: f64,
    pub omega: f64,
    pub sign: Sign,
}

fn real_shift(state: &DecomposedState) -> Result<f64> {
    let lambda = state.workspace().real_shift().ok_or_else(|| {
        Error::Parameter(format!(
            "the quadratic form needs a real decomposition shift, got {}",
            state.lambda()
        ))
    })?;
    let bound = state.model().eigenvalue().map_or(0.0, f64::abs);
    if lambda < bound * (1.0 - 1e-12) {
        return Err(Error::ShiftTooSmall { shift: lambda, bound });
    }
    Ok(lambda)
}

/// `F(u) = ‖∇φ‖² + λ(‖φ‖² − ‖u‖²) + Γ_λ |q|²`.
pub fn quadratic_form(state: &DecomposedState) -> Result<f64> {
    let lambda = real_shift(state)?;
    let grid = state.grid();
    let grad = grid.dirichlet_energy(&state.phi);
    let phi_sq = grid.norm_sq(&state.phi);
    let u_sq = state.mass();
    Ok(grad + lambda * (phi_sq - u_sq) + state.workspace().gamma().re * state.q.norm_sqr())
}

fn lp1(state: &DecomposedState, p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(state.lp_norm(p + 1.0).powf(p + 1.0))
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::Parameter(format!("the power must satisfy p > 1, got {p}")));
    }
    Ok(())
}

/// `E = F/2 ∓ ‖u‖^{p+1}_{p+1}/(p+1)`, minus for focusing.
pub fn energy(state: &DecomposedState, p: f64, sign: Sign) -> Result<f64> {
    let f = quadratic_form(state)?;
    Ok(f / 2.0 + sign.coefficient() * lp1(state, p)? / (p + 1.0))
}

/// `S_ω = E + (ω/2) M`.
pub fn action(state: &DecomposedState, p: f64, sign: Sign, omega: f64) -> Result<f64> {
    action_with(state, p, sign, omega, ActionConvention::Half)
}

pub fn action_with(
    state: &DecomposedState,
    p: f64,
    sign: Sign,
    omega: f64,
    convention: ActionConvention,
) -> Result<f64> {
    Ok(energy(state, p, sign)? + convention.mass_weight() * omega * state.mass())
}

/// `P = F − (p−1)/(p+1) ‖u‖^{p+1}_{p+1} + |q|²/(4π)`.
pub fn pohozaev(state: &DecomposedState, p: f64) -> Result<f64> {
    let f = quadratic_form(state)?;
    Ok(f - (p - 1.0) / (p + 1.0) * lp1(state, p)? + state.q.norm_sqr() / (4.0 * PI))
}

/// `F + ω M − ‖u‖^{p+1}_{p+1}`.
pub fn nehari_residual(state: &DecomposedState, p: f64, omega: f64) -> Result<f64> {
    Ok(quadratic_form(state)? + omega * state.mass() - lp1(state, p)?)
}

/// Everything above from a single pass over the state.
pub fn report(
    state: &DecomposedState,
    p: f64,
    sign: Sign,
    omega: f64,
    convention: ActionConvention,
) -> Result<FunctionalReport> {
    let f = quadratic_form(state)?;
    let l = lp1(state, p)?;
    let mass = state.mass();
    let energy = f / 2.0 + sign.coefficient() * l / (p + 1.0);
    Ok(FunctionalReport {
        mass,
        quadratic_form: f,
        energy,
        action: energy + convention.mass_weight() * omega * mass,
        pohozaev: f - (p - 1.0) / (p + 1.0) * l + state.q.norm_sqr() / (4.0 * PI),
        nehari: f + omega * mass - l,
        lp1: l,
        lambda_used: state.lambda().re,
        p,
        omega,
        sign,
    })
}
