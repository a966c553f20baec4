//! Localised virial `V = ∫ η_R |u|²`, its first two time derivatives and the
//! blow-up certificate.
//!
//! The cut-off is `η_R(r) = R² Θ(r/R)` with `Θ'' = θ` and the smoothstep
//! `θ(τ) = 1` on `[0, 1]`, `1 − s³(6s² − 15s + 10)` with `s = τ − 1` on
//! `(1, 2)`, `0` beyond.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functionals::{self, Sign};
use crate::ground_state::GroundStateReport;
use crate::operator::apply_delta_alpha;
use crate::specfun::{green_derivatives, GreenParams};
use crate::state::DecomposedState;

/// `Θ(2) = 13/7`.
const THETA_AT_TWO: f64 = 13.0 / 7.0;
/// `Θ'(∞) = ∫_0^2 θ = 3/2`.
pub const THETA_SLOPE_AT_INFINITY: f64 = 1.5;

/// `(θ, θ')` at `τ`.
fn theta(tau: f64) -> (f64, f64) {
    if tau <= 1.0 {
        (1.0, 0.0)
    } else if tau < 2.0 {
        let s = tau - 1.0;
        let s2 = s * s;
        (
            1.0 - s2 * s * (6.0 * s2 - 15.0 * s + 10.0),
            -30.0 * s2 * (s - 1.0) * (s - 1.0),
        )
    } else {
        (0.0, 0.0)
    }
}

/// `(Θ, Θ')` at `τ`.
fn big_theta(tau: f64) -> (f64, f64) {
    if tau <= 1.0 {
        (0.5 * tau * tau, tau)
    } else if tau < 2.0 {
        let x = tau - 1.0;
        let x4 = x.powi(4);
        let value = 0.5 + x + 0.5 * x * x - x4 * x * x * x / 7.0 + 0.5 * x4 * x * x - 0.5 * x4 * x;
        let slope = 1.0 + x - x4 * x * x + 3.0 * x4 * x - 2.5 * x4;
        (value, slope)
    } else {
        (
            THETA_AT_TWO + THETA_SLOPE_AT_INFINITY * (tau - 2.0),
            THETA_SLOPE_AT_INFINITY,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffValues {
    pub eta: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    /// `Δη = η'' + η'/r`.
    pub laplacian: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffProfile {
    radius: f64,
}

impl CutoffProfile {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Parameter(format!(
                "virial radius must be positive, got {radius}"
            )));
        }
        Ok(Self { radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn eval(&self, r: f64) -> CutoffValues {
        let rr = self.radius;
        let tau = r / rr;
        let (big, big1) = big_theta(tau);
        let (th, th1) = theta(tau);
        let d1 = rr * big1;
        let laplacian = if r > 0.0 { th + d1 / r } else { 2.0 };
        CutoffValues {
            eta: rr * rr * big,
            d1,
            d2: th,
            d3: th1 / rr,
            laplacian,
        }
    }
}

/// `V = ∫ η |u|²`.
pub fn virial_v(state: &DecomposedState, profile: &CutoffProfile) -> f64 {
    let u = state.total_field();
    state
        .grid()
        .integrate(|j, r| profile.eval(r).eta * u[j].norm_sqr())
}

/// `V' = 2 Im ∫ ∇η·∇u ū`, evaluated as `2 Im ⟨η u, Δ_α u⟩` on the grid.
pub fn virial_vprime(state: &DecomposedState, profile: &CutoffProfile) -> Result<f64> {
    let hu = apply_delta_alpha(state)?;
    let u = state.total_field();
    Ok(2.0
        * state
            .grid()
            .integrate(|j, r| profile.eval(r).eta * (u[j].conj() * hu[j]).im))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VirialBreakdown {
    pub four_p: f64,
    pub rem_p1: f64,
    pub rem_uhu: f64,
    pub rem_grad: f64,
    pub rem_cross: f64,
    pub rem_gg: f64,
    pub total: f64,
}

impl VirialBreakdown {
    pub fn remainder(&self) -> f64 {
        self.rem_p1 + self.rem_uhu + self.rem_grad + self.rem_cross + self.rem_gg
    }
}

/// `V'' = 4P + 𝓡` with the five remainder integrals reported separately.
pub fn virial_breakdown(
    state: &DecomposedState,
    profile: &CutoffProfile,
    p: f64,
    sign: Sign,
) -> Result<VirialBreakdown> {
    if sign != Sign::Focusing {
        return Err(Error::InapplicableSign);
    }
    let lambda = state
        .workspace()
        .real_shift()
        .ok_or_else(|| Error::Parameter("the virial breakdown needs a real decomposition shift".into()))?;
    let grid = state.grid();
    let u = state.total_field();
    let hu = apply_delta_alpha(state)?;
    let phi = &state.phi;
    let q = state.q;
    let params = GreenParams::real(state.alpha(), lambda)?;
    let four_p = 4.0 * functionals::pohozaev(state, p)?;

    let mut rem_p1 = 0.0;
    let mut rem_uhu = 0.0;
    let mut rem_cross = 0.0;
    let mut rem_gg = 0.0;
    for (j, (&r, &w)) in grid.nodes().iter().zip(grid.weights()).enumerate() {
        let c = profile.eval(r);
        let excess = c.laplacian - 2.0;
        rem_p1 += w * excess * u[j].norm().powf(p + 1.0);
        rem_uhu += w * excess * (u[j] * hu[j].conj()).re;
        if r > profile.radius() {
            let [g, g1, g2, g3] = green_derivatives(&params, r)?.map(|v| v.re);
            // f = η' − r vanishes on [0, R]
            let f = c.d1 - r;
            let f1 = c.d2 - 1.0;
            let f2 = c.d3;
            let div = f1 * g + f * g1 + f * g / r;
            let lap = f2 * g1 + 2.0 * f1 * g2 + f * g3 + (f1 * g1 + f * g2) / r;
            let term = q.conj() * lambda * phi[j] * div - q * phi[j].conj() * lap;
            rem_cross += w * term.re;
            rem_gg += w * excess * g * g;
        }
    }
    rem_p1 *= -2.0 * (p - 1.0) / (p + 1.0);
    rem_uhu *= 2.0;
    rem_cross *= 4.0;
    rem_gg *= 2.0 * lambda * q.norm_sqr();

    // 4 η'' |φ'|² − 2 Δη |φ'|² at the cell faces
    let h = grid.spacing();
    let n = grid.n_points();
    let mut rem_grad = 0.0;
    for j in 0..n {
        let rf = (j as f64 + 1.0) * h;
        if rf <= profile.radius() {
            continue;
        }
        let next = if j + 1 < n {
            phi[j + 1]
        } else {
            Complex64::default()
        };
        let slope = ((next - phi[j]) / h).norm_sqr();
        let c = profile.eval(rf);
        rem_grad += 2.0 * PI * rf * h * (4.0 * c.d2 - 2.0 * c.laplacian) * slope;
    }

    let total = four_p + rem_p1 + rem_uhu + rem_grad + rem_cross + rem_gg;
    Ok(VirialBreakdown {
        four_p,
        rem_p1,
        rem_uhu,
        rem_grad,
        rem_cross,
        rem_gg,
        total,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlowupCertificate {
    /// `S_ω(v_ω) − S_ω(u₀)`, must be positive.
    pub action_margin: f64,
    /// `E(u₀)`, must be non-negative.
    pub energy_margin: f64,
    /// `−P(u₀)`, must be positive.
    pub pohozaev_margin: f64,
    /// Upper bound `2(S_ω(u₀) − S_ω(v_ω))` for `P` along the flow.
    pub pohozaev_bound: f64,
    /// `δ = 2(S_ω(v_ω) − S_ω(u₀))`.
    pub delta: f64,
    /// Suggested `c₂ = δ/2`.
    pub c2: f64,
    /// `3 < p ≤ 5`.
    pub hypothesis_applicable: bool,
    pub certified: bool,
}

/// Margins below this fraction of the action are treated as zero.
const MARGIN_TOL: f64 = 1e-12;

/// Evaluates the three hypotheses of the blow-up theorem for `u0` against a
/// converged ground state.
pub fn blowup_certificate(
    u0: &DecomposedState,
    ground: &GroundStateReport,
    p: f64,
) -> Result<BlowupCertificate> {
    if !ground.converged {
        return Err(Error::UnusableReference);
    }
    let omega = ground.omega;
    let s_ground = ground.action_value;
    let s0 = functionals::action(u0, p, Sign::Focusing, omega)?;
    let e0 = functionals::energy(u0, p, Sign::Focusing)?;
    let p0 = functionals::pohozaev(u0, p)?;
    let tol = MARGIN_TOL * s_ground.abs().max(1.0);
    let action_margin = s_ground - s0;
    let pohozaev_margin = -p0;
    let hypothesis_applicable = p > 3.0 && p <= 5.0;
    let delta = 2.0 * action_margin;
    Ok(BlowupCertificate {
        action_margin,
        energy_margin: e0,
        pohozaev_margin,
        pohozaev_bound: -delta,
        delta,
        c2: delta / 2.0,
        hypothesis_applicable,
        certified: hypothesis_applicable && action_margin > tol && e0 >= 0.0 && pohozaev_margin > tol,
    })
}
