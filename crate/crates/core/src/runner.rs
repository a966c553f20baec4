//! Orchestration of the command-line jobs and their output files.
//!
//! Every job writes into its output directory a `config.txt` echo of the
//! resolved configuration, its CSV tables, JSON snapshots and a plain-text
//! `summary.txt`. CSV files start with `#` lines carrying the manifest hash
//! and the decomposition shift, followed by the column header. Nothing
//! written depends on the wall clock, so identical inputs give identical
//! bytes.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{Command, InitialKind, JobConfig};
use crate::error::{Error, Result};
use crate::evolution::{
    self, default_projection_shift, make_initial_data, InitialData, RunOutcome, TimeSeriesRecord,
};
use crate::functionals::{self, Sign};
use crate::ground_state::{solve_ground_state, GroundStateOptions, GroundStateReport};
use crate::inequality::{self, GridPair, InequalityRow};
use crate::operator::PointInteraction;
use crate::snapshot::Snapshot;
use crate::specfun::{eigenvalue_alpha, gamma_coeff, green_value, GreenParams};
use crate::state::DecomposedState;
use crate::virial::{self, blowup_certificate, BlowupCertificate, CutoffProfile, VirialBreakdown};

pub const EVOLUTION_COLUMNS: [&str; 12] = [
    "t",
    "mass",
    "energy",
    "F",
    "pohozaev",
    "V",
    "Vprime",
    "Vsecond_analytic",
    "h1_alpha",
    "q_re",
    "q_im",
    "sup_field",
];

pub const VIRIAL_COLUMNS: [&str; 9] = [
    "t",
    "four_P",
    "rem_p1",
    "rem_uHu",
    "rem_grad",
    "rem_cross",
    "rem_GG",
    "total",
    "V_fd_second",
];

pub const INEQUALITY_COLUMNS: [&str; 6] = [
    "family",
    "params",
    "grid",
    "ratio",
    "empirical_C",
    "refinement_flag",
];

pub const GROUND_STATE_LOG_COLUMNS: [&str; 3] = ["iteration", "action", "residual"];

pub const SPECTRUM_COLUMNS: [&str; 6] = [
    "lambda",
    "gamma_continuum",
    "gamma_lattice",
    "green_l2_sampled",
    "green_l2_lattice",
    "green_l2_exact",
];

/// Provenance of one job.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: Command,
    pub config_path: Option<PathBuf>,
    /// Canonical text of the resolved configuration.
    pub resolved: String,
    pub out_dir: PathBuf,
    pub seed: u64,
    /// SHA-256 over the command, resolved configuration, seed and any input
    /// snapshot.
    pub hash: String,
}

impl RunManifest {
    pub fn new(job: &JobConfig, config_path: Option<&Path>, out_dir: &Path, seed: u64) -> Result<Self> {
        let resolved = job.emit();
        let mut hasher = Sha256::new();
        hasher.update(job.command.name().as_bytes());
        hasher.update(b"\n");
        hasher.update(resolved.as_bytes());
        hasher.update(format!("seed = {seed}\n").as_bytes());
        if let (InitialKind::Snapshot, Some(path)) = (job.initial, &job.snapshot) {
            hasher.update(fs::read(path)?);
        }
        let hash = hasher.finalize().iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        });
        Ok(Self {
            command: job.command,
            config_path: config_path.map(Path::to_path_buf),
            resolved,
            out_dir: out_dir.to_path_buf(),
            seed,
            hash,
        })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }
}

/// How a job ended when it did not fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Completed,
    BlowUp,
}

/// Process exit code for a job result.
pub fn exit_code(result: &Result<Outcome>) -> i32 {
    match result {
        Ok(Outcome::Completed) => 0,
        Ok(Outcome::BlowUp) => 2,
        Err(Error::Config { .. }) => 3,
        Err(_) => 1,
    }
}

/// CSV writer whose file starts with the manifest header lines.
pub struct CsvTable {
    writer: csv::Writer<BufWriter<File>>,
}

impl CsvTable {
    pub fn create(path: &Path, manifest: &RunManifest, lambda_ref: f64, columns: &[&str]) -> Result<Self> {
        let mut file = BufWriter::new(File::create(path)?);
        writeln!(file, "# pointnls {}", manifest.command)?;
        writeln!(file, "# manifest sha256 {}", manifest.hash)?;
        writeln!(
            file,
            "# lambda_ref = {lambda_ref:?} (decomposition shift; default max(1, 2|e_alpha|))"
        )?;
        let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(file);
        writer.write_record(columns).map_err(csv_error)?;
        Ok(Self { writer })
    }

    pub fn row<T: Serialize>(&mut self, row: &T) -> Result<()> {
        self.writer.serialize(row).map_err(csv_error)
    }

    pub fn finish(mut self) -> Result<()> {
        self.writer.flush()?;
        Ok(())
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Runs `job`, writing everything under `manifest.out_dir`.
pub fn execute(job: &JobConfig, manifest: &RunManifest) -> Result<Outcome> {
    fs::create_dir_all(&manifest.out_dir)?;
    fs::write(manifest.path("config.txt"), &manifest.resolved)?;
    match job.command {
        Command::Spectrum => spectrum(job, manifest),
        Command::Groundstate => groundstate(job, manifest),
        Command::Evolve => evolve(job, manifest),
        Command::BlowupDemo => blowup_demo(job, manifest),
        Command::VirialScan => virial_scan(job, manifest),
        Command::Inequalities => inequalities(job, manifest),
    }
}

/// Values in `summary.txt`; floats in shortest round-trip form.
trait Field {
    fn render(&self) -> String;
}

impl Field for f64 {
    fn render(&self) -> String {
        format!("{self:?}")
    }
}

impl Field for usize {
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Field for bool {
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Field for String {
    fn render(&self) -> String {
        self.clone()
    }
}

struct Summary {
    text: String,
}

impl Summary {
    fn new(manifest: &RunManifest) -> Self {
        let mut text = String::new();
        let _ = writeln!(text, "command: {}", manifest.command);
        let _ = writeln!(text, "manifest: sha256 {}", manifest.hash);
        let _ = writeln!(text, "seed: {}", manifest.seed);
        Self { text }
    }

    fn line(&mut self, key: &str, value: impl Field) {
        let _ = writeln!(self.text, "{key}: {}", value.render());
    }

    fn write(self, manifest: &RunManifest) -> Result<()> {
        fs::write(manifest.path("summary.txt"), self.text)?;
        Ok(())
    }
}

fn model_and_lambda(job: &JobConfig) -> Result<(Arc<PointInteraction>, f64)> {
    let model = job.sim.build_model()?;
    let lambda = job.sim.resolved_lambda_ref(&model)?;
    Ok((model, lambda))
}

#[derive(Serialize)]
struct SpectrumRow {
    lambda: f64,
    gamma_continuum: f64,
    gamma_lattice: f64,
    green_l2_sampled: f64,
    green_l2_lattice: f64,
    green_l2_exact: f64,
}

fn spectrum(job: &JobConfig, manifest: &RunManifest) -> Result<Outcome> {
    let (model, lambda_ref) = model_and_lambda(job)?;
    let alpha = job.sim.alpha;
    let e = eigenvalue_alpha(alpha);
    let mut summary = Summary::new(manifest);
    summary.line("alpha", alpha);
    summary.line("e_alpha", e);
    summary.line(
        "gamma_coeff(alpha, |e_alpha|)",
        gamma_coeff(alpha, Complex64::new(e.abs(), 0.0))?.re,
    );
    summary.line(
        "discrete eigenvalue",
        model
            .eigenvalue()
            .map_or("none".to_string(), |v| format!("{v:?}")),
    );
    summary.line("coupling", model.coupling());
    summary.line("calibration shift", model.calibration_shift());

    let mut shifts = job.shifts.clone();
    shifts.push(e.abs());
    let mut table = CsvTable::create(
        &manifest.path("spectrum.csv"),
        manifest,
        lambda_ref,
        &SPECTRUM_COLUMNS,
    )?;
    let grid = Arc::clone(model.grid());
    for lambda in shifts {
        let params = GreenParams::real(alpha, lambda)?;
        let mut sampled = 0.0;
        for (&r, &w) in grid.nodes().iter().zip(grid.weights()) {
            sampled += w * green_value(&params, r)?.norm_sqr();
        }
        let ws = model.workspace_real(lambda)?;
        table.row(&SpectrumRow {
            lambda,
            gamma_continuum: gamma_coeff(alpha, Complex64::new(lambda, 0.0))?.re,
            gamma_lattice: ws.gamma().re,
            green_l2_sampled: sampled,
            green_l2_lattice: grid.norm_sq(ws.green()),
            green_l2_exact: 1.0 / (4.0 * PI * lambda),
        })?;
    }
    table.finish()?;
    summary.write(manifest)?;
    Ok(Outcome::Completed)
}

fn ground_options(job: &JobConfig, lambda_ref: f64) -> GroundStateOptions {
    GroundStateOptions {
        lambda_ref: Some(lambda_ref),
        ..job.ground.clone()
    }
}

fn write_ground_state(report: &GroundStateReport, manifest: &RunManifest, lambda_ref: f64) -> Result<()> {
    Snapshot::from_state(&report.state, Some(report.p))?.write(&manifest.path("ground_state.json"))?;
    let mut log = CsvTable::create(
        &manifest.path("groundstate_log.csv"),
        manifest,
        lambda_ref,
        &GROUND_STATE_LOG_COLUMNS,
    )?;
    for rec in &report.log {
        log.row(rec)?;
    }
    log.finish()
}

fn describe_ground_state(summary: &mut Summary, report: &GroundStateReport) -> Result<()> {
    let p = report.p;
    let f = functionals::report(&report.state, p, Sign::Focusing, report.omega, Default::default())?;
    summary.line("omega", report.omega);
    summary.line("p", p);
    summary.line("converged", report.converged);
    summary.line("iterations", report.iterations);
    summary.line("action", f.action);
    summary.line("(1/2 - 1/(p+1)) L", (0.5 - 1.0 / (p + 1.0)) * f.lp1);
    summary.line("stationary residual (relative)", report.residual);
    summary.line("nehari residual (relative)", report.nehari);
    summary.line("pohozaev", f.pohozaev);
    summary.line("pohozaev scale |F| + L", f.quadratic_form.abs() + f.lp1);
    summary.line("energy", f.energy);
    summary.line("mass", f.mass);
    summary.line("q", report.state.q.re);
    Ok(())
}

fn groundstate(job: &JobConfig, manifest: &RunManifest) -> Result<Outcome> {
    let (model, lambda_ref) = model_and_lambda(job)?;
    let report = solve_ground_state(&model, job.sim.omega, job.sim.p, &ground_options(job, lambda_ref))?;
    write_ground_state(&report, manifest, lambda_ref)?;
    let mut summary = Summary::new(manifest);
    describe_ground_state(&mut summary, &report)?;
    summary.write(manifest)?;
    if report.converged {
        Ok(Outcome::Completed)
    } else {
        Err(Error::UnusableReference)
    }
}

fn initial_state(
    job: &JobConfig,
    model: &Arc<PointInteraction>,
    lambda_ref: f64,
    ground: Option<&GroundStateReport>,
) -> Result<DecomposedState> {
    let projection = job.with_charge.then(|| {
        job.projection_shift
            .unwrap_or_else(|| default_projection_shift(lambda_ref, job.width))
    });
    let kind = match job.initial {
        InitialKind::Gaussian => InitialData::Gaussian {
            amplitude: job.amplitude,
            width: job.width,
            projection,
        },
        InitialKind::GaussianMass => InitialData::GaussianWithMass {
            mass: job.mass,
            width: job.width,
            projection,
        },
        InitialKind::ScaledGroundState => InitialData::ScaledGroundState { c_max: job.c_max },
        InitialKind::Snapshot => {
            let path = job.snapshot.as_deref().ok_or_else(|| Error::Config {
                line: 0,
                msg: "initial = snapshot needs a snapshot path".into(),
            })?;
            return Snapshot::read(Path::new(path))?
                .to_state(model)?
                .change_lambda_to(Complex64::new(lambda_ref, 0.0));
        }
    };
    make_initial_data(&kind, model, lambda_ref, ground)
}

fn ground_if_needed(
    job: &JobConfig,
    model: &Arc<PointInteraction>,
    lambda_ref: f64,
    manifest: &RunManifest,
) -> Result<Option<GroundStateReport>> {
    if job.initial != InitialKind::ScaledGroundState {
        return Ok(None);
    }
    let report = solve_ground_state(model, job.sim.omega, job.sim.p, &ground_options(job, lambda_ref))?;
    write_ground_state(&report, manifest, lambda_ref)?;
    if !report.converged {
        return Err(Error::UnusableReference);
    }
    Ok(Some(report))
}

fn relative_drift(first: f64, last: f64) -> f64 {
    (last - first).abs() / first.abs().max(f64::MIN_POSITIVE)
}

fn describe_run(summary: &mut Summary, outcome: &RunOutcome) {
    let recs = &outcome.records;
    let (first, last) = (&recs[0], &recs[recs.len() - 1]);
    let span = (last.t - first.t).max(f64::MIN_POSITIVE);
    summary.line(
        "blowup",
        outcome.blowup.map_or("none".to_string(), |b| format!("{b:?}")),
    );
    summary.line("t_final", outcome.t_final);
    summary.line("accepted steps", outcome.steps);
    summary.line("rejected steps", outcome.rejected);
    summary.line("smallest dt", outcome.smallest_dt);
    summary.line(
        "mass drift per unit time",
        relative_drift(first.mass, last.mass) / span,
    );
    summary.line(
        "energy drift per unit time",
        relative_drift(first.energy, last.energy) / span,
    );
    summary.line("h1_alpha initial", first.h1_alpha);
    summary.line(
        "h1_alpha max",
        recs.iter().map(|r| r.h1_alpha).fold(f64::NEG_INFINITY, f64::max),
    );
    summary.line(
        "h1_alpha min",
        recs.iter().map(|r| r.h1_alpha).fold(f64::INFINITY, f64::min),
    );
    // reported, not asserted: the constraint near the end of the run
    let tail = recs.iter().filter(|r| r.t >= first.t + 0.95 * span);
    summary.line(
        "constraint defect, final 5%",
        tail.map(|r| r.constraint_defect).fold(0.0, f64::max),
    );
}

fn evolution_table(manifest: &RunManifest, lambda_ref: f64) -> Result<CsvTable> {
    CsvTable::create(
        &manifest.path("evolution.csv"),
        manifest,
        lambda_ref,
        &EVOLUTION_COLUMNS,
    )
}

fn finish_run(outcome: &RunOutcome, manifest: &RunManifest, p: f64) -> Result<()> {
    if outcome.final_state.is_finite() {
        Snapshot::from_state(&outcome.final_state, Some(p))?.write(&manifest.path("final_state.json"))?;
    }
    Ok(())
}

fn evolve(job: &JobConfig, manifest: &RunManifest) -> Result<Outcome> {
    let (model, lambda_ref) = model_and_lambda(job)?;
    let ground = ground_if_needed(job, &model, lambda_ref, manifest)?;
    let u0 = initial_state(job, &model, lambda_ref, ground.as_ref())?;
    Snapshot::from_state(&u0, Some(job.sim.p))?.write(&manifest.path("initial_state.json"))?;
    let mut table = evolution_table(manifest, lambda_ref)?;
    let outcome = evolution::run(&job.sim, &u0, &mut |rec, _| table.row(rec))?;
    table.finish()?;
    finish_run(&outcome, manifest, job.sim.p)?;
    let mut summary = Summary::new(manifest);
    describe_run(&mut summary, &outcome);
    summary.write(manifest)?;
    Ok(if outcome.blowup.is_some() {
        Outcome::BlowUp
    } else {
        Outcome::Completed
    })
}

/// One row of a virial CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VirialRow {
    pub t: f64,
    #[serde(rename = "four_P")]
    pub four_p: f64,
    pub rem_p1: f64,
    #[serde(rename = "rem_uHu")]
    pub rem_uhu: f64,
    pub rem_grad: f64,
    pub rem_cross: f64,
    #[serde(rename = "rem_GG")]
    pub rem_gg: f64,
    pub total: f64,
    #[serde(rename = "V_fd_second")]
    pub v_fd_second: f64,
}

/// Second differences of `V` on a non-uniform time grid; NaN at the ends.
pub fn fd_second(t: &[f64], v: &[f64]) -> Vec<f64> {
    let n = t.len();
    (0..n)
        .map(|k| {
            if k == 0 || k + 1 >= n {
                return f64::NAN;
            }
            let (h1, h2) = (t[k] - t[k - 1], t[k + 1] - t[k]);
            2.0 * ((v[k + 1] - v[k]) / h2 - (v[k] - v[k - 1]) / h1) / (h1 + h2)
        })
        .collect()
}

/// Virial CSV rows with finite-difference `V″` from the sampled `V`.
pub fn virial_rows(samples: &[(f64, f64, VirialBreakdown)]) -> Vec<VirialRow> {
    let t: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let v: Vec<f64> = samples.iter().map(|s| s.1).collect();
    samples
        .iter()
        .zip(fd_second(&t, &v))
        .map(|(&(t, _, b), fd)| VirialRow {
            t,
            four_p: b.four_p,
            rem_p1: b.rem_p1,
            rem_uhu: b.rem_uhu,
            rem_grad: b.rem_grad,
            rem_cross: b.rem_cross,
            rem_gg: b.rem_gg,
            total: b.total,
            v_fd_second: fd,
        })
        .collect()
}

fn write_virial(path: &Path, manifest: &RunManifest, lambda_ref: f64, rows: &[VirialRow]) -> Result<()> {
    let mut table = CsvTable::create(path, manifest, lambda_ref, &VIRIAL_COLUMNS)?;
    for r in rows {
        table.row(r)?;
    }
    table.finish()
}

/// The end-to-end checks of a blow-up run, as reported in its summary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlowupChecks {
    pub certificate: BlowupCertificate,
    pub detected: bool,
    pub h1_growth: f64,
    /// `max_t P(u(t))`, to be compared with `certificate.pohozaev_bound`.
    pub pohozaev_max: f64,
    pub pohozaev_below_bound: bool,
    /// `min_t ‖u(t)‖_{H¹_α} / ‖u₀‖_{H¹_α}`.
    pub h1_floor_ratio: f64,
    /// `max` of the finite-difference `V″` over the final quarter.
    pub fd_second_max_final_quarter: f64,
}

pub fn blowup_checks(
    certificate: BlowupCertificate,
    outcome: &RunOutcome,
    rows: &[VirialRow],
) -> BlowupChecks {
    let recs = &outcome.records;
    let h0 = recs[0].h1_alpha;
    let pohozaev_max = recs.iter().map(|r| r.pohozaev).fold(f64::NEG_INFINITY, f64::max);
    let quarter = 0.75 * outcome.t_final;
    BlowupChecks {
        certificate,
        detected: outcome.blowup.is_some(),
        h1_growth: recs.iter().map(|r| r.h1_alpha).fold(0.0, f64::max) / h0,
        pohozaev_max,
        pohozaev_below_bound: pohozaev_max < certificate.pohozaev_bound,
        h1_floor_ratio: recs.iter().map(|r| r.h1_alpha).fold(f64::INFINITY, f64::min) / h0,
        fd_second_max_final_quarter: rows
            .iter()
            .filter(|r| r.t >= quarter && r.v_fd_second.is_finite())
            .map(|r| r.v_fd_second)
            .fold(f64::NEG_INFINITY, f64::max),
    }
}

fn blowup_demo(job: &JobConfig, manifest: &RunManifest) -> Result<Outcome> {
    if job.sim.sign != Sign::Focusing {
        return Err(Error::InapplicableSign);
    }
    let (model, lambda_ref) = model_and_lambda(job)?;
    let ground = solve_ground_state(&model, job.sim.omega, job.sim.p, &ground_options(job, lambda_ref))?;
    write_ground_state(&ground, manifest, lambda_ref)?;
    let u0 = make_initial_data(
        &InitialData::ScaledGroundState { c_max: job.c_max },
        &model,
        lambda_ref,
        Some(&ground),
    )?;
    let certificate = blowup_certificate(&u0, &ground, job.sim.p)?;
    Snapshot::from_state(&u0, Some(job.sim.p))?.write(&manifest.path("initial_state.json"))?;

    let profile = CutoffProfile::new(job.sim.virial_radius())?;
    let mut samples = Vec::new();
    let mut table = evolution_table(manifest, lambda_ref)?;
    let outcome = evolution::run(&job.sim, &u0, &mut |rec: &TimeSeriesRecord, state| {
        table.row(rec)?;
        samples.push((
            rec.t,
            rec.v,
            virial::virial_breakdown(state, &profile, job.sim.p, Sign::Focusing)?,
        ));
        Ok(())
    })?;
    table.finish()?;
    let rows = virial_rows(&samples);
    write_virial(&manifest.path("virial.csv"), manifest, lambda_ref, &rows)?;
    finish_run(&outcome, manifest, job.sim.p)?;

    let checks = blowup_checks(certificate, &outcome, &rows);
    let mut summary = Summary::new(manifest);
    describe_ground_state(&mut summary, &ground)?;
    summary.line("action margin S(v) - S(u0)", certificate.action_margin);
    summary.line("energy E(u0)", certificate.energy_margin);
    summary.line("pohozaev margin -P(u0)", certificate.pohozaev_margin);
    summary.line("certified", certificate.certified);
    summary.line("pohozaev bound along the flow", certificate.pohozaev_bound);
    summary.line("max pohozaev along the flow", checks.pohozaev_max);
    summary.line("h1_alpha growth", checks.h1_growth);
    summary.line("h1_alpha floor ratio", checks.h1_floor_ratio);
    summary.line(
        "max finite-difference V'' in the final quarter",
        checks.fd_second_max_final_quarter,
    );
    describe_run(&mut summary, &outcome);
    summary.write(manifest)?;
    Ok(if checks.detected {
        Outcome::BlowUp
    } else {
        Outcome::Completed
    })
}

fn virial_scan(job: &JobConfig, manifest: &RunManifest) -> Result<Outcome> {
    if job.sim.sign != Sign::Focusing {
        return Err(Error::InapplicableSign);
    }
    let (model, lambda_ref) = model_and_lambda(job)?;
    let ground = ground_if_needed(job, &model, lambda_ref, manifest)?;
    let u0 = initial_state(job, &model, lambda_ref, ground.as_ref())?;
    let profiles = job
        .virial_radii
        .iter()
        .map(|&r| CutoffProfile::new(r))
        .collect::<Result<Vec<_>>>()?;
    let mut samples: Vec<Vec<(f64, f64, VirialBreakdown)>> = vec![Vec::new(); profiles.len()];
    let mut table = evolution_table(manifest, lambda_ref)?;
    let p = job.sim.p;
    let outcome = evolution::run(&job.sim, &u0, &mut |rec, state| {
        table.row(rec)?;
        for (profile, out) in profiles.iter().zip(samples.iter_mut()) {
            out.push((
                rec.t,
                virial::virial_v(state, profile),
                virial::virial_breakdown(state, profile, p, Sign::Focusing)?,
            ));
        }
        Ok(())
    })?;
    table.finish()?;
    finish_run(&outcome, manifest, p)?;
    let mut summary = Summary::new(manifest);
    for (profile, s) in profiles.iter().zip(&samples) {
        let name = format!("virial_R{}.csv", profile.radius());
        write_virial(&manifest.path(&name), manifest, lambda_ref, &virial_rows(s))?;
        summary.line(
            &format!("|remainder| at t = 0, R = {}", profile.radius()),
            s[0].2.remainder().abs(),
        );
        summary.line(
            &format!("max |remainder|, R = {}", profile.radius()),
            s.iter().map(|x| x.2.remainder().abs()).fold(0.0, f64::max),
        );
    }
    describe_run(&mut summary, &outcome);
    summary.write(manifest)?;
    Ok(if outcome.blowup.is_some() {
        Outcome::BlowUp
    } else {
        Outcome::Completed
    })
}

/// All inequality families of the bench, in output order.
pub fn inequality_rows(job: &JobConfig, seed: u64) -> Result<Vec<InequalityRow>> {
    let model = job.sim.build_model()?;
    let lambda = job.sim.resolved_lambda_ref(&model)?;
    let pair = GridPair::new(
        job.sim.alpha,
        (job.sim.n_points / 2).max(16),
        job.sim.r_max,
        lambda,
    )?;
    let members = inequality::random_family(seed, job.members);
    let mut rows = inequality::log_hardy_family(job.cells_per_scale)?;
    rows.extend(inequality::strauss_family(job.cells_per_scale)?);
    for rho in [2.0, 4.0, 6.0] {
        rows.extend(inequality::sobolev_family(&pair, &members, rho)?);
    }
    rows.extend(inequality::gagliardo_nirenberg_family(&pair, &members, 3.0)?);
    rows.extend(inequality::kato_family(
        &pair,
        seed,
        job.kato_pairs,
        3.0,
        job.kato_eps,
        job.kato_bound,
    )?);
    rows.extend(inequality::singular_nonlinearity_family(
        &pair,
        &members,
        3.0,
        job.kato_eps,
    )?);
    Ok(rows)
}

#[derive(Serialize)]
struct InequalityCsvRow<'a> {
    family: &'a str,
    params: &'a str,
    grid: &'a str,
    ratio: f64,
    #[serde(rename = "empirical_C")]
    empirical_c: f64,
    refinement_flag: bool,
}

fn inequalities(job: &JobConfig, manifest: &RunManifest) -> Result<Outcome> {
    let rows = inequality_rows(job, manifest.seed)?;
    let (_, lambda_ref) = model_and_lambda(job)?;
    let mut table = CsvTable::create(
        &manifest.path("inequalities.csv"),
        manifest,
        lambda_ref,
        &INEQUALITY_COLUMNS,
    )?;
    for r in &rows {
        table.row(&InequalityCsvRow {
            family: &r.family,
            params: &r.params,
            grid: &r.grid,
            ratio: r.ratio,
            empirical_c: r.empirical_c,
            refinement_flag: r.refinement_flag,
        })?;
    }
    table.finish()?;
    let mut summary = Summary::new(manifest);
    let mut families: Vec<&str> = Vec::new();
    for r in &rows {
        if !families.contains(&r.family.as_str()) {
            families.push(&r.family);
        }
    }
    for fam in families {
        let of: Vec<&InequalityRow> = rows.iter().filter(|r| r.family == fam).collect();
        summary.line(&format!("{fam} empirical C"), of[0].empirical_c);
        summary.line(
            &format!("{fam} refinement flags"),
            format!(
                "{} of {}",
                of.iter().filter(|r| r.refinement_flag).count(),
                of.len()
            ),
        );
    }
    if let Some(gn) = rows.iter().find(|r| r.family == "gagliardo_nirenberg") {
        summary.line("C_GN lower bound (p = 3)", gn.empirical_c);
        summary.line("small-mass threshold 2 C_GN^-4", 2.0 * gn.empirical_c.powi(-4));
    }
    summary.write(manifest)?;
    Ok(Outcome::Completed)
}
