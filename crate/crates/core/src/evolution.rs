//! Time integration of `i∂_t u = Δ_α u ± |u|^{p-1} u`.
//!
//! Crank–Nicolson in the linear part, Adams–Bashforth extrapolation of the
//! nonlinearity to the half step. With `w = (uⁿ + uⁿ⁺¹)/2` one step reads
//! `(z + Δ_α) w = z uⁿ − g`, `z = −2i/τ`, so it is a single resolvent solve.
//! The result is re-decomposed at the reference shift and `uⁿ⁺¹ = 2w − uⁿ`
//! is formed on `(φ, q)`, which keeps the domain constraint exact.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functionals::{self, ActionConvention, Sign};
use crate::ground_state::{default_lambda_ref, GroundStateReport};
use crate::operator::{resolvent, PointInteraction, ResolventWorkspace};
use crate::state::DecomposedState;
use crate::virial::{self, blowup_certificate, CutoffProfile};

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub alpha: f64,
    pub p: f64,
    pub sign: Sign,
    pub dt: f64,
    pub t_end: f64,
    pub n_points: usize,
    pub r_max: f64,
    /// Defaults to `max(1, 2|e_α|)`.
    pub lambda_ref: Option<f64>,
    /// Record every this many macro steps of length `dt`.
    pub monitor_every: usize,
    /// Defaults to `r_max / 4`.
    pub virial_r: Option<f64>,
    /// Blow-up once `‖u‖_{H¹_α}` exceeds this multiple of its initial value.
    pub blowup_norm_threshold: f64,
    pub dt_min: f64,
    /// Local error tolerance of the adaptive step; `0` keeps `dt` fixed.
    pub adapt_tol: f64,
    /// Frequency used for the action in summaries.
    pub omega: f64,
    pub action_convention: ActionConvention,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            alpha: 0.0,
            p: 3.0,
            sign: Sign::Focusing,
            dt: 1e-3,
            t_end: 1.0,
            n_points: 4096,
            r_max: 40.0,
            lambda_ref: None,
            monitor_every: 100,
            virial_r: None,
            blowup_norm_threshold: 1e3,
            dt_min: 1e-6,
            adapt_tol: 1e-5,
            omega: 2.0,
            action_convention: ActionConvention::Half,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Parameter(m));
        if !self.alpha.is_finite() {
            return bad(format!("alpha must be finite, got {}", self.alpha));
        }
        if !(self.p > 1.0) || !self.p.is_finite() {
            return bad(format!("p > 1 is required, got {}", self.p));
        }
        if !(self.dt > 0.0) || !(self.t_end > 0.0) {
            return bad("dt and t_end must be positive".into());
        }
        if self.monitor_every == 0 {
            return bad("monitor_every must be at least 1".into());
        }
        if !(self.dt_min > 0.0) || self.dt_min > self.dt {
            return bad(format!("dt_min must lie in (0, dt], got {}", self.dt_min));
        }
        if !(self.blowup_norm_threshold > 1.0) {
            return bad("blowup_norm_threshold must exceed 1".into());
        }
        if !(self.adapt_tol >= 0.0) {
            return bad("adapt_tol must be non-negative".into());
        }
        if let Some(r) = self.virial_r {
            if !(r > 0.0) {
                return bad(format!("virial_R must be positive, got {r}"));
            }
        }
        Ok(())
    }

    pub fn virial_radius(&self) -> f64 {
        self.virial_r.unwrap_or(self.r_max / 4.0)
    }

    /// Grid and operator described by this configuration.
    pub fn build_model(&self) -> Result<Arc<PointInteraction>> {
        let grid = Arc::new(crate::grid::RadialGrid::new(self.n_points, self.r_max)?);
        PointInteraction::new(grid, self.alpha)
    }

    pub fn resolved_lambda_ref(&self, model: &PointInteraction) -> Result<f64> {
        let lambda = self.lambda_ref.unwrap_or_else(|| default_lambda_ref(model));
        let bound = model.eigenvalue().map_or(0.0, f64::abs);
        if !(lambda > bound) {
            return Err(Error::ShiftTooSmall { shift: lambda, bound });
        }
        Ok(lambda)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeSeriesRecord {
    pub t: f64,
    pub mass: f64,
    pub energy: f64,
    #[serde(rename = "F")]
    pub quadratic_form: f64,
    pub pohozaev: f64,
    #[serde(rename = "V")]
    pub v: f64,
    #[serde(rename = "Vprime")]
    pub vprime: f64,
    /// `4P + 𝓡`; NaN for the defocusing sign.
    #[serde(rename = "Vsecond_analytic")]
    pub vsecond: f64,
    pub h1_alpha: f64,
    pub q_re: f64,
    pub q_im: f64,
    pub sup_field: f64,
    #[serde(skip)]
    pub constraint_defect: f64,
}

impl TimeSeriesRecord {
    pub fn q(&self) -> Complex64 {
        Complex64::new(self.q_re, self.q_im)
    }
}

/// Monitors one state.
pub fn record(
    state: &DecomposedState,
    t: f64,
    p: f64,
    sign: Sign,
    profile: &CutoffProfile,
) -> Result<TimeSeriesRecord> {
    let report = functionals::report(state, p, sign, 0.0, ActionConvention::Half)?;
    let vsecond = match sign {
        Sign::Focusing => virial::virial_breakdown(state, profile, p, sign)?.total,
        Sign::Defocusing => f64::NAN,
    };
    Ok(TimeSeriesRecord {
        t,
        mass: report.mass,
        energy: report.energy,
        quadratic_form: report.quadratic_form,
        pohozaev: report.pohozaev,
        v: virial::virial_v(state, profile),
        vprime: virial::virial_vprime(state, profile)?,
        vsecond,
        h1_alpha: state.norms().h1_alpha,
        q_re: state.q.re,
        q_im: state.q.im,
        sup_field: state.sup_field(),
        constraint_defect: state.constraint_defect(),
    })
}

fn nonlinearity(u: &[Complex64], p: f64, coefficient: f64) -> Vec<Complex64> {
    u.iter()
        .map(|v| v * (coefficient * v.norm().powf(p - 1.0)))
        .collect()
}

fn all_finite(v: &[Complex64]) -> bool {
    v.iter().all(|x| x.re.is_finite() && x.im.is_finite())
}

/// One proposed step, not yet committed to the integrator's history.
#[derive(Debug, Clone)]
pub struct Proposal {
    pub state: DecomposedState,
    /// `τ ‖N(w) − g‖ / ‖w‖`.
    pub error: f64,
    tau: f64,
    current_nonlinearity: Vec<Complex64>,
}

/// Crank–Nicolson / Adams–Bashforth stepper with cached factorisations.
pub struct Integrator {
    model: Arc<PointInteraction>,
    reference: Arc<ResolventWorkspace>,
    p: f64,
    coefficient: f64,
    previous: Option<(Vec<Complex64>, f64)>,
    cache: HashMap<u64, Arc<ResolventWorkspace>>,
}

impl Integrator {
    pub fn new(model: &Arc<PointInteraction>, lambda_ref: f64, p: f64, sign: Sign) -> Result<Self> {
        Self::with_coefficient(model, lambda_ref, p, sign.coefficient())
    }

    /// Stepper for `i∂_t u = Δ_α u + c |u|^{p-1} u`; `c = 0` is the linear flow.
    pub fn with_coefficient(
        model: &Arc<PointInteraction>,
        lambda_ref: f64,
        p: f64,
        coefficient: f64,
    ) -> Result<Self> {
        Ok(Self {
            model: Arc::clone(model),
            reference: model.workspace_real(lambda_ref)?,
            p,
            coefficient,
            previous: None,
            cache: HashMap::new(),
        })
    }

    pub fn reference(&self) -> &Arc<ResolventWorkspace> {
        &self.reference
    }

    /// Forget the multistep history (next step starts with `g = N(uⁿ)`).
    pub fn reset_history(&mut self) {
        self.previous = None;
    }

    fn workspace(&mut self, tau: f64) -> Result<Arc<ResolventWorkspace>> {
        if let Some(ws) = self.cache.get(&tau.to_bits()) {
            return Ok(Arc::clone(ws));
        }
        if self.cache.len() > 32 {
            self.cache.clear();
        }
        let ws = self.model.workspace(Complex64::new(0.0, -2.0 / tau))?;
        self.cache.insert(tau.to_bits(), Arc::clone(&ws));
        Ok(ws)
    }

    pub fn propose(&mut self, u: &DecomposedState, tau: f64) -> Result<Proposal> {
        let ws = self.workspace(tau)?;
        let un = u.change_lambda(&self.reference)?;
        let field = un.total_field();
        let current = nonlinearity(&field, self.p, self.coefficient);
        let g: Vec<Complex64> = match &self.previous {
            Some((prev, tau_prev)) => {
                let rho = tau / tau_prev;
                current
                    .iter()
                    .zip(prev)
                    .map(|(a, b)| a * (1.0 + 0.5 * rho) - b * (0.5 * rho))
                    .collect()
            }
            None => current.clone(),
        };
        let z = ws.shift();
        let rhs: Vec<Complex64> = field.iter().zip(&g).map(|(x, gi)| z * x - gi).collect();
        let w = resolvent(&ws, &rhs)?.change_lambda(&self.reference)?;
        let w_field = w.total_field();
        if !all_finite(&w_field) {
            return Err(Error::NumericalOverflow);
        }
        let error = if self.coefficient == 0.0 {
            0.0
        } else {
            let nw = nonlinearity(&w_field, self.p, self.coefficient);
            let diff: Vec<Complex64> = nw.iter().zip(&g).map(|(a, b)| a - b).collect();
            let grid = w.grid();
            tau.abs() * (grid.norm_sq(&diff) / grid.norm_sq(&w_field).max(1e-300)).sqrt()
        };
        let state = w.combine(Complex64::new(2.0, 0.0), &un, Complex64::new(-1.0, 0.0))?;
        if !state.is_finite() {
            return Err(Error::NumericalOverflow);
        }
        Ok(Proposal {
            state,
            error,
            tau,
            current_nonlinearity: current,
        })
    }

    pub fn accept(&mut self, proposal: Proposal) -> DecomposedState {
        self.previous = Some((proposal.current_nonlinearity, proposal.tau));
        proposal.state
    }

    /// One committed step of length `tau`.
    pub fn step(&mut self, u: &DecomposedState, tau: f64) -> Result<DecomposedState> {
        let proposal = self.propose(u, tau)?;
        Ok(self.accept(proposal))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlowupReason {
    NormThreshold,
    StepUnderflow,
    NonFinite,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub final_state: DecomposedState,
    pub records: Vec<TimeSeriesRecord>,
    pub blowup: Option<BlowupReason>,
    pub t_final: f64,
    pub steps: usize,
    pub rejected: usize,
    pub smallest_dt: f64,
}

/// Integrates `u0` to `t_end` or to blow-up. `sink` sees every record in
/// order together with the state it was taken from; the last finite record
/// is always emitted.
pub fn run(
    config: &SimConfig,
    u0: &DecomposedState,
    sink: &mut dyn FnMut(&TimeSeriesRecord, &DecomposedState) -> Result<()>,
) -> Result<RunOutcome> {
    config.validate()?;
    let model = Arc::clone(u0.model());
    let lambda_ref = config.resolved_lambda_ref(&model)?;
    let mut integrator = Integrator::new(&model, lambda_ref, config.p, config.sign)?;
    let profile = CutoffProfile::new(config.virial_radius())?;

    let mut u = u0.change_lambda(integrator.reference())?;
    let mut records = Vec::new();
    let first = record(&u, 0.0, config.p, config.sign, &profile)?;
    let h1_initial = first.h1_alpha;
    sink(&first, &u)?;
    records.push(first);

    let macro_steps = (config.t_end / config.dt).round().max(1.0) as usize;
    let mut tau = config.dt;
    let mut steps = 0;
    let mut rejected = 0;
    let mut smallest_dt = config.dt;
    let mut blowup = None;
    let mut t = 0.0;
    let mut last_recorded = 0;

    'outer: for k in 1..=macro_steps {
        let t_target = k as f64 * config.dt;
        while t_target - t > 1e-9 * config.dt {
            let remaining = t_target - t;
            let this = if remaining <= tau * (1.0 + 1e-9) {
                remaining
            } else {
                tau
            };
            let proposal = match integrator.propose(&u, this) {
                Ok(p) => p,
                Err(Error::NumericalOverflow) => {
                    blowup = Some(BlowupReason::NonFinite);
                    break 'outer;
                }
                Err(e) => return Err(e),
            };
            if config.adapt_tol > 0.0 && proposal.error > config.adapt_tol {
                rejected += 1;
                tau = 0.5 * this;
                if tau < config.dt_min {
                    blowup = Some(BlowupReason::StepUnderflow);
                    break 'outer;
                }
                continue;
            }
            let error = proposal.error;
            u = integrator.accept(proposal);
            steps += 1;
            t = if remaining <= this { t_target } else { t + this };
            smallest_dt = smallest_dt.min(tau);
            if config.adapt_tol > 0.0 && error < config.adapt_tol / 8.0 {
                tau = (2.0 * tau).min(config.dt);
            }
        }
        t = t_target;
        let norm = u.norms().h1_alpha;
        if !norm.is_finite() {
            blowup = Some(BlowupReason::NonFinite);
            break;
        }
        if norm > config.blowup_norm_threshold * h1_initial {
            blowup = Some(BlowupReason::NormThreshold);
        }
        if k % config.monitor_every == 0 || k == macro_steps || blowup.is_some() {
            let rec = record(&u, t, config.p, config.sign, &profile)?;
            sink(&rec, &u)?;
            records.push(rec);
            last_recorded = k;
        }
        if blowup.is_some() {
            break;
        }
    }
    if blowup.is_some() && last_recorded as f64 * config.dt < t && u.is_finite() {
        if let Ok(rec) = record(&u, t, config.p, config.sign, &profile) {
            if rec.h1_alpha.is_finite() {
                sink(&rec, &u)?;
                records.push(rec);
            }
        }
    }
    Ok(RunOutcome {
        final_state: u,
        records,
        blowup,
        t_final: t,
        steps,
        rejected,
        smallest_dt,
    })
}

/// Recipes for initial data.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    /// `f = A e^{-(r/σ)²}`. With a projection shift `μ` the datum is
    /// `μ(μ + Δ_α)^{-1} f`, a domain element close to `f` for `μσ² ≫ 1`;
    /// without one the total field is `f` itself.
    Gaussian {
        amplitude: f64,
        width: f64,
        projection: Option<f64>,
    },
    /// The same construction with unit amplitude, rescaled to the given mass.
    GaussianWithMass {
        mass: f64,
        width: f64,
        projection: Option<f64>,
    },
    /// `c·v_ω` with `c ∈ (1, c_max]` chosen so the blow-up certificate holds.
    ScaledGroundState { c_max: f64 },
}

/// Projection shift used when none is given: `max(λ_ref, 10/σ²)`.
pub fn default_projection_shift(lambda_ref: f64, width: f64) -> f64 {
    lambda_ref.max(10.0 / (width * width))
}

/// Builds initial data decomposed at `lambda_ref`.
pub fn make_initial_data(
    kind: &InitialData,
    model: &Arc<PointInteraction>,
    lambda_ref: f64,
    ground: Option<&GroundStateReport>,
) -> Result<DecomposedState> {
    let ws = model.workspace_real(lambda_ref)?;
    match *kind {
        InitialData::Gaussian {
            amplitude,
            width,
            projection,
        } => gaussian(model, &ws, amplitude, width, projection),
        InitialData::GaussianWithMass {
            mass,
            width,
            projection,
        } => {
            if !(mass >= 0.0) {
                return Err(Error::Parameter(format!("mass must be non-negative, got {mass}")));
            }
            let unit = gaussian(model, &ws, 1.0, width, projection)?;
            let scale = (mass / unit.mass()).sqrt();
            Ok(unit.scaled(Complex64::new(scale, 0.0)))
        }
        InitialData::ScaledGroundState { c_max } => {
            let ground = ground.ok_or(Error::UnusableReference)?;
            scaled_ground_state(ground, c_max, &ws)
        }
    }
}

fn gaussian(
    model: &Arc<PointInteraction>,
    ws: &Arc<ResolventWorkspace>,
    amplitude: f64,
    width: f64,
    projection: Option<f64>,
) -> Result<DecomposedState> {
    if !(width > 0.0) {
        return Err(Error::Parameter(format!("width must be positive, got {width}")));
    }
    let f = model
        .grid()
        .sample(|r| Complex64::new(amplitude * (-(r / width).powi(2)).exp(), 0.0));
    match projection {
        None => DecomposedState::from_total_field(&f, Arc::clone(ws)),
        Some(mu) => {
            let at = model.workspace_real(mu)?;
            resolvent(&at, &f)?
                .scaled(Complex64::new(mu, 0.0))
                .change_lambda(ws)
        }
    }
}

/// Finds `c_E = sup{c ≤ c_max : E(c v_ω) ≥ 0}` by bisection and returns
/// `c·v_ω` with `c = (1 + c_E)/2` once the certificate holds there.
fn scaled_ground_state(
    ground: &GroundStateReport,
    c_max: f64,
    ws: &Arc<ResolventWorkspace>,
) -> Result<DecomposedState> {
    if !ground.converged {
        return Err(Error::UnusableReference);
    }
    if !(c_max > 1.0) {
        return Err(Error::Parameter(format!("c_max must exceed 1, got {c_max}")));
    }
    let v = ground.state.change_lambda(ws)?;
    let p = ground.p;
    let at = |c: f64| blowup_certificate(&v.scaled(Complex64::new(c, 0.0)), ground, p);
    let unsatisfiable = |c: f64| -> Result<Error> {
        let cert = at(c)?;
        Ok(Error::CertificateUnsatisfiable {
            c_max,
            action_margin: cert.action_margin,
            energy_margin: cert.energy_margin,
            pohozaev_margin: cert.pohozaev_margin,
        })
    };
    let mut lo = 1.0;
    let mut hi = c_max;
    if at(hi)?.energy_margin < 0.0 {
        // E(c v) = c²F/2 − c^{p+1}L/(p+1) is positive on (0, c_E) only
        if at(1.0 + 1e-6)?.energy_margin < 0.0 {
            return Err(unsatisfiable(c_max)?);
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if at(mid)?.energy_margin >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi = lo;
    }
    let c = 0.5 * (1.0 + hi);
    let cert = at(c)?;
    if !cert.certified {
        return Err(unsatisfiable(c)?);
    }
    Ok(v.scaled(Complex64::new(c, 0.0)))
}
