//! Falsification bench for the functional inequalities behind the
//! well-posedness and blow-up arguments.
//!
//! Every check reports an empirical constant: the largest ratio seen over a
//! family of trial functions. A bounded ratio is evidence, not proof. Each
//! ratio is computed at two resolutions and flagged when they differ by more
//! than [`REFINEMENT_TOL`].

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::operator::PointInteraction;
use crate::state::DecomposedState;

/// Relative change between resolutions above which a ratio is flagged.
pub const REFINEMENT_TOL: f64 = 0.1;

/// Outer radius of the log-Hardy integral.
pub const LOG_HARDY_RADIUS: f64 = 0.5;

/// Discrete `‖u‖_{H¹} = (‖u‖² + ‖u'‖²)^{1/2}` of a plain grid field.
pub fn h1_norm(grid: &RadialGrid, u: &[Complex64]) -> f64 {
    (grid.norm_sq(u) + grid.dirichlet_energy(u)).sqrt()
}

fn check_log_hardy(a: f64, b: f64) -> Result<()> {
    if !(a > 1.0) || !(b > 1.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Parameter(format!(
            "log-Hardy exponents need 1 < a, b < inf, got a = {a}, b = {b}"
        )));
    }
    if 1.0 + a - b >= 0.0 {
        return Err(Error::HypothesisViolated(format!(
            "log-Hardy needs 1 + a - b < 0, got {}",
            1.0 + a - b
        )));
    }
    Ok(())
}

/// `∫_{|x|<1/2} |u|^a / (|x|² |log |x||^b) dx`.
///
/// The weight is integrated exactly over each cell, `|u|^a` is taken
/// constant on the cell. With `W(r) = (−log r)^{1−b}/(b−1)` the cell weight
/// is `2π (W(r_+) − W(r_-))`, and `W(0) = 0`.
pub fn log_hardy_numerator(grid: &RadialGrid, u: &[Complex64], a: f64, b: f64) -> Result<f64> {
    check_log_hardy(a, b)?;
    grid.check_len(u.len())?;
    let w = |r: f64| {
        if r <= 0.0 {
            0.0
        } else {
            (-r.ln()).powf(1.0 - b) / (b - 1.0)
        }
    };
    let h = grid.spacing();
    let mut acc = 0.0;
    for (j, v) in u.iter().enumerate() {
        let lo = j as f64 * h;
        if lo >= LOG_HARDY_RADIUS {
            break;
        }
        let hi = ((j + 1) as f64 * h).min(LOG_HARDY_RADIUS);
        acc += v.norm().powf(a) * (w(hi) - w(lo));
    }
    Ok(2.0 * PI * acc)
}

/// Numerator over `‖u‖^a_{H¹}`.
pub fn log_hardy_ratio(grid: &RadialGrid, u: &[Complex64], a: f64, b: f64) -> Result<f64> {
    let num = log_hardy_numerator(grid, u, a, b)?;
    let den = h1_norm(grid, u).powf(a);
    ratio(num, den)
}

fn ratio(num: f64, den: f64) -> Result<f64> {
    if !(den > 0.0) {
        return Err(Error::Parameter("ratio of a zero function".into()));
    }
    Ok(num / den)
}

/// `‖u‖_{L^ρ} / ‖u‖_{H¹_α}`.
pub fn sobolev_ratio(state: &DecomposedState, rho: f64) -> Result<f64> {
    if !(rho >= 2.0) || !rho.is_finite() {
        return Err(Error::Parameter(format!(
            "the Sobolev exponent needs rho >= 2, got {rho}"
        )));
    }
    ratio(state.lp_norm(rho), state.norms().h1_alpha)
}

/// `sup_{r ≥ r_min} r^{1/2} |u(r)| / (‖u‖^{1/2} ‖u'‖^{1/2})`.
pub fn strauss_ratio(grid: &RadialGrid, u: &[Complex64], r_min: f64) -> Result<f64> {
    if !(r_min > 0.0) {
        return Err(Error::Parameter(format!("r_min must be positive, got {r_min}")));
    }
    grid.check_len(u.len())?;
    let sup = grid
        .nodes()
        .iter()
        .zip(u)
        .filter(|(&r, _)| r >= r_min)
        .map(|(&r, v)| r.sqrt() * v.norm())
        .fold(0.0, f64::max);
    let den = (grid.norm_sq(u).sqrt() * grid.dirichlet_energy(u).sqrt()).sqrt();
    ratio(sup, den)
}

/// `‖u‖_{L^{p+1}} / (‖u‖^{2/(p+1)}_{L²} ‖u‖^{1−2/(p+1)}_{H¹_α})`.
pub fn gagliardo_nirenberg_ratio(state: &DecomposedState, p: f64) -> Result<f64> {
    if !(p > 1.0) {
        return Err(Error::Parameter(format!("the power must satisfy p > 1, got {p}")));
    }
    let theta = 2.0 / (p + 1.0);
    let norms = state.norms();
    ratio(
        state.lp_norm(p + 1.0),
        norms.mass.sqrt().powf(theta) * norms.h1_alpha.powf(1.0 - theta),
    )
}

fn power_term(u: &[Complex64], p: f64) -> Vec<Complex64> {
    u.iter().map(|v| v * v.norm().powf(p - 1.0)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KatoReport {
    /// `max ‖g(u) − g(v)‖_{L^{2−ε}} / ‖u − v‖_{L²}`.
    pub worst_ratio: f64,
    /// Worst ratio over `‖u‖^{p−1}_{H¹_α} + ‖v‖^{p−1}_{H¹_α}`, a fitted constant.
    pub fitted_constant: f64,
    /// Pairs with `u ≠ v`.
    pub pairs_used: usize,
}

/// Lipschitz bound of `g(u) = |u|^{p−1}u` from `L²` into `L^{2−ε}`.
pub fn kato_lipschitz_check(
    pairs: &[(DecomposedState, DecomposedState)],
    p: f64,
    eps: f64,
) -> Result<KatoReport> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Parameter(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    if !(p > 1.0) {
        return Err(Error::Parameter(format!("the power must satisfy p > 1, got {p}")));
    }
    let r_prime = 2.0 - eps;
    let mut report = KatoReport {
        worst_ratio: 0.0,
        fitted_constant: 0.0,
        pairs_used: 0,
    };
    for (u, v) in pairs {
        let grid = u.grid();
        let fu = u.total_field();
        let fv = v.total_field();
        let diff: Vec<Complex64> = fu.iter().zip(&fv).map(|(a, b)| a - b).collect();
        let den = grid.norm_sq(&diff).sqrt();
        if den == 0.0 {
            continue;
        }
        let gd: Vec<Complex64> = power_term(&fu, p)
            .iter()
            .zip(&power_term(&fv, p))
            .map(|(a, b)| a - b)
            .collect();
        let r = grid.lp_norm(&gd, r_prime) / den;
        let shape = u.norms().h1_alpha.powf(p - 1.0) + v.norms().h1_alpha.powf(p - 1.0);
        report.worst_ratio = report.worst_ratio.max(r);
        report.fitted_constant = report.fitted_constant.max(r / shape);
        report.pairs_used += 1;
    }
    Ok(report)
}

/// `‖g(u)‖_{L^{2−ε}}`, finite even with the logarithmic singularity.
pub fn nonlinearity_norm(state: &DecomposedState, p: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Parameter(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    let g = power_term(&state.total_field(), p);
    Ok(state.grid().lp_norm(&g, 2.0 - eps))
}

/// A radial trial function, realisable on any grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Trial {
    /// `A e^{−(r/σ)²}`.
    Gaussian { amplitude: f64, width: f64 },
    /// `1` on `r ≤ 1/2`, a smoothstep down to `0` at `r = 1`.
    Bump,
    /// `(1 + log(1 + 1/(r + σ)))^β e^{−r²}`, bounded in `H¹` as `σ → 0` for
    /// `β < 1/2`.
    LogModulated { beta: f64, sigma: f64 },
}

impl Trial {
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            Trial::Gaussian { amplitude, width } => amplitude * (-(r / width).powi(2)).exp(),
            Trial::Bump => {
                if r <= 0.5 {
                    1.0
                } else if r >= 1.0 {
                    0.0
                } else {
                    let s = 2.0 * (r - 0.5);
                    1.0 - s * s * s * (6.0 * s * s - 15.0 * s + 10.0)
                }
            }
            Trial::LogModulated { beta, sigma } => {
                (1.0 + (1.0 + 1.0 / (r + sigma)).ln()).powf(beta) * (-r * r).exp()
            }
        }
    }

    pub fn sample(&self, grid: &RadialGrid) -> Vec<Complex64> {
        grid.sample(|r| Complex64::new(self.eval(r), 0.0))
    }

    /// Smallest length scale the grid has to resolve.
    pub fn scale(&self) -> f64 {
        match *self {
            Trial::Gaussian { width, .. } => width,
            Trial::Bump => 0.5,
            Trial::LogModulated { sigma, .. } => sigma,
        }
    }

    fn support(&self) -> f64 {
        match *self {
            Trial::Gaussian { width, .. } => 8.0 * width,
            Trial::Bump => 1.0,
            Trial::LogModulated { .. } => 8.0,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Trial::Gaussian { amplitude, width } => format!("amplitude={amplitude};width={width}"),
            Trial::Bump => "bump".into(),
            Trial::LogModulated { beta, sigma } => format!("beta={beta};sigma={sigma}"),
        }
    }

    /// A grid resolving the trial with `cells_per_scale` cells per scale.
    pub fn grid(&self, cells_per_scale: usize) -> Result<RadialGrid> {
        let r_max = self.support().max(1.0);
        let h = self.scale() / cells_per_scale as f64;
        RadialGrid::new((r_max / h).ceil() as usize, r_max)
    }
}

/// One row of the results CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityRow {
    pub family: String,
    pub params: String,
    pub grid: String,
    pub ratio: f64,
    pub empirical_c: f64,
    pub refinement_flag: bool,
}

fn grid_label(grid: &RadialGrid) -> String {
    format!("{}/{}", grid.n_points(), grid.r_max())
}

fn flagged(coarse: f64, fine: f64) -> bool {
    !((coarse - fine).abs() <= REFINEMENT_TOL * fine.abs())
}

/// Ratios of one family at two resolutions; `empirical_c` is the family max
/// at the finer one.
fn family_rows(family: &str, entries: Vec<(String, String, f64, f64)>) -> Vec<InequalityRow> {
    let c = entries.iter().map(|e| e.3).fold(f64::NEG_INFINITY, f64::max);
    entries
        .into_iter()
        .map(|(params, grid, coarse, fine)| InequalityRow {
            family: family.into(),
            params,
            grid,
            ratio: fine,
            empirical_c: c,
            refinement_flag: flagged(coarse, fine),
        })
        .collect()
}

/// Log-Hardy ratios for `a = 2, b = 4` over the concentrating Gaussians,
/// the log-modulated family and the bump.
pub fn log_hardy_family(cells_per_scale: usize) -> Result<Vec<InequalityRow>> {
    let (a, b) = (2.0, 4.0);
    let mut trials = vec![Trial::Bump];
    for &width in &[1.0, 0.1, 0.01] {
        trials.push(Trial::Gaussian {
            amplitude: 1.0,
            width,
        });
    }
    for &sigma in &[0.1, 0.01, 0.001] {
        trials.push(Trial::LogModulated { beta: 0.3, sigma });
    }
    let mut entries = Vec::new();
    for t in trials {
        let coarse = t.grid(cells_per_scale)?;
        let fine = t.grid(2 * cells_per_scale)?;
        entries.push((
            format!("a={a};b={b};{}", t.label()),
            grid_label(&fine),
            log_hardy_ratio(&coarse, &t.sample(&coarse), a, b)?,
            log_hardy_ratio(&fine, &t.sample(&fine), a, b)?,
        ));
    }
    Ok(family_rows("log_hardy", entries))
}

/// Strauss ratios over the concentrating Gaussians, `r_min` one cell.
pub fn strauss_family(cells_per_scale: usize) -> Result<Vec<InequalityRow>> {
    let mut entries = Vec::new();
    for &width in &[1.0, 0.1, 0.01] {
        let t = Trial::Gaussian {
            amplitude: 1.0,
            width,
        };
        let coarse = t.grid(cells_per_scale)?;
        let fine = t.grid(2 * cells_per_scale)?;
        entries.push((
            t.label(),
            grid_label(&fine),
            strauss_ratio(&coarse, &t.sample(&coarse), coarse.spacing())?,
            strauss_ratio(&fine, &t.sample(&fine), coarse.spacing())?,
        ));
    }
    Ok(family_rows("strauss", entries))
}

/// Gaussian regular part with an independent charge, a point of the form
/// domain of `Δ_α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargedGaussian {
    pub amplitude: f64,
    pub width: f64,
    pub charge: f64,
}

impl ChargedGaussian {
    /// `amplitude ∈ [0.2, 2]`, `width ∈ [0.3, 3]`, `charge ∈ [0, 1]`.
    pub fn random(rng: &mut impl Rng) -> Self {
        Self {
            amplitude: rng.gen_range(0.2..2.0),
            width: rng.gen_range(0.3..3.0),
            charge: rng.gen_range(0.0..1.0),
        }
    }

    pub fn realize(&self, model: &Arc<PointInteraction>, lambda: f64) -> Result<DecomposedState> {
        let ws = model.workspace_real(lambda)?;
        let g = Trial::Gaussian {
            amplitude: self.amplitude,
            width: self.width,
        };
        DecomposedState::new(g.sample(model.grid()), Complex64::new(self.charge, 0.0), ws)
    }

    pub fn label(&self) -> String {
        format!(
            "amplitude={};width={};charge={}",
            self.amplitude, self.width, self.charge
        )
    }
}

/// `n` random members, reproducible from `seed`.
pub fn random_family(seed: u64, n: usize) -> Vec<ChargedGaussian> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| ChargedGaussian::random(&mut rng)).collect()
}

/// Two models on the same box, the second at twice the resolution.
#[derive(Debug, Clone)]
pub struct GridPair {
    pub coarse: Arc<PointInteraction>,
    pub fine: Arc<PointInteraction>,
    pub lambda: f64,
}

impl GridPair {
    pub fn new(alpha: f64, n_points: usize, r_max: f64, lambda: f64) -> Result<Self> {
        let coarse = PointInteraction::new(Arc::new(RadialGrid::new(n_points, r_max)?), alpha)?;
        let fine = PointInteraction::new(Arc::new(RadialGrid::new(2 * n_points, r_max)?), alpha)?;
        Ok(Self { coarse, fine, lambda })
    }

    fn both<F>(&self, member: &ChargedGaussian, f: F) -> Result<(f64, f64)>
    where
        F: Fn(&DecomposedState) -> Result<f64>,
    {
        Ok((
            f(&member.realize(&self.coarse, self.lambda)?)?,
            f(&member.realize(&self.fine, self.lambda)?)?,
        ))
    }

    fn label(&self) -> String {
        grid_label(self.fine.grid())
    }
}

/// `‖u‖_{L^ρ}/‖u‖_{H¹_α}` over the random family.
pub fn sobolev_family(pair: &GridPair, members: &[ChargedGaussian], rho: f64) -> Result<Vec<InequalityRow>> {
    let mut entries = Vec::new();
    for m in members {
        let (c, f) = pair.both(m, |s| sobolev_ratio(s, rho))?;
        entries.push((format!("rho={rho};{}", m.label()), pair.label(), c, f));
    }
    Ok(family_rows("sobolev", entries))
}

/// Gagliardo–Nirenberg ratios; the family max is a lower bound on `C_GN`.
pub fn gagliardo_nirenberg_family(
    pair: &GridPair,
    members: &[ChargedGaussian],
    p: f64,
) -> Result<Vec<InequalityRow>> {
    let mut entries = Vec::new();
    for m in members {
        let (c, f) = pair.both(m, |s| gagliardo_nirenberg_ratio(s, p))?;
        entries.push((format!("p={p};{}", m.label()), pair.label(), c, f));
    }
    Ok(family_rows("gagliardo_nirenberg", entries))
}

/// Empirical lower bound on `C_GN` for power `p` and the small-mass threshold
/// `2 Ĉ^{−4}` derived from it.
pub fn gn_mass_threshold(pair: &GridPair, members: &[ChargedGaussian], p: f64) -> Result<(f64, f64)> {
    let rows = gagliardo_nirenberg_family(pair, members, p)?;
    let c = rows.first().map_or(0.0, |r| r.empirical_c);
    Ok((c, 2.0 * c.powi(-4)))
}

/// Kato Lipschitz check on `n_pairs` random pairs scaled into the
/// `H¹_α` ball of radius `bound`, at both resolutions.
pub fn kato_family(
    pair: &GridPair,
    seed: u64,
    n_pairs: usize,
    p: f64,
    eps: f64,
    bound: f64,
) -> Result<Vec<InequalityRow>> {
    let members = random_family(seed, 2 * n_pairs);
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for model in [&pair.coarse, &pair.fine] {
        let mut pairs = Vec::with_capacity(n_pairs);
        for k in 0..n_pairs {
            let mut u = members[2 * k].realize(model, pair.lambda)?;
            let mut v = members[2 * k + 1].realize(model, pair.lambda)?;
            for s in [&mut u, &mut v] {
                let n = s.norms().h1_alpha;
                if n > bound {
                    *s = s.scaled(Complex64::new(bound / n, 0.0));
                }
            }
            pairs.push((u, v));
        }
        reports.push(kato_lipschitz_check(&pairs, p, eps)?);
    }
    let (coarse, fine) = (reports[0], reports[1]);
    rows.push(InequalityRow {
        family: "kato_lipschitz".into(),
        params: format!("p={p};eps={eps};bound={bound};pairs={}", fine.pairs_used),
        grid: pair.label(),
        ratio: fine.worst_ratio,
        empirical_c: fine.fitted_constant,
        refinement_flag: flagged(coarse.worst_ratio, fine.worst_ratio),
    });
    Ok(rows)
}

/// `‖g(u)‖_{L^{2−ε}}` for charged states at both resolutions.
pub fn singular_nonlinearity_family(
    pair: &GridPair,
    members: &[ChargedGaussian],
    p: f64,
    eps: f64,
) -> Result<Vec<InequalityRow>> {
    let mut entries = Vec::new();
    for m in members.iter().filter(|m| m.charge > 0.0) {
        let (c, f) = pair.both(m, |s| nonlinearity_norm(s, p, eps))?;
        entries.push((format!("p={p};eps={eps};{}", m.label()), pair.label(), c, f));
    }
    Ok(family_rows("nonlinearity_norm", entries))
}
