use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use pointnls::runner::{EVOLUTION_COLUMNS, INEQUALITY_COLUMNS, SPECTRUM_COLUMNS, VIRIAL_COLUMNS};
use pointnls::snapshot::Snapshot;

const BIN: &str = env!("CARGO_BIN_EXE_pointnls");

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> i32 {
    let out = Command::new(BIN).args(args).output().expect("binary runs");
    out.status.code().expect("exit code")
}

fn run_job(cmd: &str, config: &str, out: &Path, extra: &[&str]) -> i32 {
    let cfg = configs().join(config);
    let mut args = vec![
        cmd,
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    run(&args)
}

/// Header comment lines and the column row, then numeric rows.
fn read_csv(path: &Path) -> (Vec<String>, Vec<String>, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let mut comments = Vec::new();
    let mut lines = text.lines();
    let columns = loop {
        let line = lines.next().expect("column row");
        if let Some(c) = line.strip_prefix('#') {
            comments.push(c.trim().to_string());
        } else {
            break line.split(',').map(str::to_string).collect::<Vec<_>>();
        }
    };
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (comments, columns, rows)
}

fn column(columns: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let j = columns
        .iter()
        .position(|c| c == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[j].parse().unwrap()).collect()
}

fn summary_value(dir: &Path, key: &str) -> f64 {
    let text = fs::read_to_string(dir.join("summary.txt")).unwrap();
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no {key} in summary"))
        .trim()
        .parse()
        .unwrap()
}

#[test]
fn spectrum_reports_the_eigenvalue() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("spectrum");
    assert_eq!(run_job("spectrum", "spectrum.conf", &out, &[]), 0);

    let e0 = summary_value(&out, "e_alpha");
    let euler_gamma = 0.577_215_664_901_532_9_f64;
    assert!((e0 + 4.0 * (-2.0 * euler_gamma).exp()).abs() < 1e-12);
    assert!((e0 + 1.26097).abs() < 5e-5);
    assert!(summary_value(&out, "gamma_coeff(alpha, |e_alpha|)").abs() < 1e-12);

    let (comments, columns, rows) = read_csv(&out.join("spectrum.csv"));
    assert_eq!(comments[0], "pointnls spectrum");
    assert!(comments[1].starts_with("manifest sha256 "));
    assert!(comments[2].starts_with("lambda_ref = "));
    assert_eq!(columns, SPECTRUM_COLUMNS);
    for (sampled, exact) in column(&columns, &rows, "green_l2_sampled")
        .into_iter()
        .zip(column(&columns, &rows, "green_l2_exact"))
    {
        assert!((sampled - exact).abs() < 1e-2 * exact, "{sampled} vs {exact}");
    }
}

#[test]
fn configuration_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x");
    let bad = dir.path().join("bad.conf");
    fs::write(
        &bad,
        "alpha = 0\np = 0.5\nsign = focusing\ndt = 1e-3\nt_end = 1\n",
    )
    .unwrap();
    let o = out.to_str().unwrap();
    assert_eq!(run(&["evolve", "--config", bad.to_str().unwrap(), "--out", o]), 3);
    assert_eq!(
        run_job("evolve", "evolve_defocusing.conf", &out, &["--override", "p=0.5"]),
        3
    );
    assert_eq!(run(&["spectrum", "--out", o]), 3, "alpha is mandatory");
    assert_eq!(
        run(&["spectrum", "--config", "/nonexistent/x.conf", "--out", o]),
        3
    );
    assert_eq!(run(&["no-such-command"]), 3);
    assert!(!out.join("spectrum.csv").exists());
}

#[test]
fn runs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let short = [
        "--override",
        "n_points=256",
        "--override",
        "r_max=20",
        "--override",
        "t_end=0.2",
    ];
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(run_job("evolve", "evolve_defocusing.conf", &a, &short), 0);
    assert_eq!(run_job("evolve", "evolve_defocusing.conf", &b, &short), 0);
    for file in ["evolution.csv", "summary.txt", "final_state.json", "config.txt"] {
        assert_eq!(
            fs::read(a.join(file)).unwrap(),
            fs::read(b.join(file)).unwrap(),
            "{file}"
        );
    }

    let (comments, columns, rows) = read_csv(&a.join("evolution.csv"));
    assert_eq!(comments[0], "pointnls evolve");
    assert_eq!(columns, EVOLUTION_COLUMNS);
    assert!(rows.len() >= 3);
    let mass = column(&columns, &rows, "mass");
    assert!(mass.iter().all(|m| (m - mass[0]).abs() < 1e-6 * mass[0]));

    // The seed enters the manifest hash.
    let c = dir.path().join("c");
    let mut seeded = short.to_vec();
    seeded.extend_from_slice(&["--seed", "7"]);
    assert_eq!(run_job("evolve", "evolve_defocusing.conf", &c, &seeded), 0);
    let (other, _, _) = read_csv(&c.join("evolution.csv"));
    assert_ne!(comments[1], other[1]);
}

#[test]
fn inequality_bench_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let small = ["--override", "members=5", "--override", "kato_pairs=10"];
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(run_job("inequalities", "inequalities.conf", &a, &small), 0);
    assert_eq!(run_job("inequalities", "inequalities.conf", &b, &small), 0);
    let (x, y) = (
        fs::read(a.join("inequalities.csv")).unwrap(),
        fs::read(b.join("inequalities.csv")).unwrap(),
    );
    assert_eq!(x, y);

    let (_, columns, rows) = read_csv(&a.join("inequalities.csv"));
    assert_eq!(columns, INEQUALITY_COLUMNS);
    let families: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    for f in [
        "log_hardy",
        "sobolev",
        "strauss",
        "gagliardo_nirenberg",
        "kato_lipschitz",
        "nonlinearity_norm",
    ] {
        assert!(families.contains(&f), "{f} missing from {families:?}");
    }
}

#[test]
fn groundstate_snapshot_feeds_an_evolution() {
    let dir = tempfile::tempdir().unwrap();
    let gs = dir.path().join("gs");
    let grid = ["--override", "n_points=1024", "--override", "r_max=20"];
    assert_eq!(run_job("groundstate", "groundstate.conf", &gs, &grid), 0);

    let snap_path = gs.join("ground_state.json");
    let snap = Snapshot::read(&snap_path).unwrap();
    assert_eq!(snap.n_points, 1024);
    assert_eq!(snap.p, Some(4.0));
    assert!(snap.q_re > 0.0);
    let model = snap.model().unwrap();
    let state = snap.to_state(&model).unwrap();
    assert!(state.constraint_defect() < 1e-8);

    let (_, columns, rows) = read_csv(&gs.join("groundstate_log.csv"));
    let action = column(&columns, &rows, "action");
    assert!(action.windows(2).all(|w| w[1] <= w[0] + 1e-9 * w[0].abs()));

    // A stationary state evolves with constant mass and h1 norm.
    let ev = dir.path().join("ev");
    let snap_arg = format!("snapshot={}", snap_path.display());
    let extra = [
        grid[0],
        grid[1],
        grid[2],
        grid[3],
        "--override",
        "initial=snapshot",
        "--override",
        &snap_arg,
        "--override",
        "p=4",
        "--override",
        "sign=focusing",
        "--override",
        "t_end=0.2",
        "--override",
        "monitor_every=20",
    ];
    assert_eq!(run_job("evolve", "evolve_defocusing.conf", &ev, &extra), 0);
    let (_, columns, rows) = read_csv(&ev.join("evolution.csv"));
    let h1 = column(&columns, &rows, "h1_alpha");
    assert!(h1.iter().all(|v| (v - h1[0]).abs() < 1e-3 * h1[0]), "{h1:?}");
}

#[test]
fn blowup_demo_exits_two_with_negative_virial() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("blowup");
    assert_eq!(run_job("blowup-demo", "blowup.conf", &out, &[]), 2);

    let (comments, columns, rows) = read_csv(&out.join("virial.csv"));
    assert_eq!(comments[0], "pointnls blowup-demo");
    assert_eq!(columns, VIRIAL_COLUMNS);
    let t = column(&columns, &rows, "t");
    let total = column(&columns, &rows, "total");
    let t_final = *t.last().unwrap();
    let tail: Vec<f64> = t
        .iter()
        .zip(&total)
        .filter(|(t, _)| **t >= 0.75 * t_final)
        .map(|(_, v)| *v)
        .collect();
    assert!(!tail.is_empty());
    assert!(tail.iter().all(|v| *v < 0.0), "{tail:?}");
    assert!(summary_value(&out, "h1_alpha max") > 10.0 * summary_value(&out, "h1_alpha initial"));
    assert!(out.join("final_state.json").exists());
}

#[test]
fn virial_scan_writes_one_table_per_radius() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan");
    let short = ["--override", "n_points=1024", "--override", "t_end=0.1"];
    assert_eq!(run_job("virial-scan", "virial_scan.conf", &out, &short), 0);
    for r in [5, 10, 20] {
        let (_, columns, rows) = read_csv(&out.join(format!("virial_R{r}.csv")));
        assert_eq!(columns, VIRIAL_COLUMNS);
        let four_p = column(&columns, &rows, "four_P");
        let total = column(&columns, &rows, "total");
        assert!(four_p
            .iter()
            .zip(&total)
            .all(|(a, b)| (a - b).abs() < 1e-2 * a.abs()));
    }
}
