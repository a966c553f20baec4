use pointnls::config::{Command, InitialKind, JobConfig, KEYS};
use pointnls::ground_state::default_lambda_ref;
use pointnls::specfun::eigenvalue_alpha;
use pointnls::{Error, Sign};

const MINIMAL_EVOLVE: &str = "alpha = 0.3\np = 3\nsign = focusing\ndt = 1e-3\nt_end = 2\n";

fn config_error(r: pointnls::Result<JobConfig>) -> (usize, String) {
    match r {
        Err(Error::Config { line, msg }) => (line, msg),
        other => panic!("expected a config error, got {other:?}"),
    }
}

#[test]
fn minimal_evolve_resolves_defaults() {
    let job = JobConfig::parse(Command::Evolve, MINIMAL_EVOLVE).unwrap();
    assert_eq!(job.sim.n_points, 4096);
    assert_eq!(job.sim.r_max, 40.0);
    assert_eq!(job.sim.lambda_ref, None);
    assert_eq!(job.sim.sign, Sign::Focusing);
    assert_eq!(job.initial, InitialKind::Gaussian);

    let model = job.sim.build_model().unwrap();
    let lambda = job.sim.resolved_lambda_ref(&model).unwrap();
    let e = eigenvalue_alpha(0.3).abs();
    assert!(
        (lambda - (2.0 * e).max(1.0)).abs() < 1e-3 * lambda,
        "{lambda} vs {e}"
    );
    assert_eq!(lambda, default_lambda_ref(&model));
}

#[test]
fn p_below_one_is_rejected_at_its_line() {
    let text = "alpha = 0\n# comment\np = 0.5\nsign = focusing\ndt = 1e-3\nt_end = 1\n";
    let (line, msg) = config_error(JobConfig::parse(Command::Evolve, text));
    assert_eq!(line, 3);
    assert!(msg.contains("p > 1"), "{msg}");
}

#[test]
fn emit_parse_is_idempotent_for_every_command() {
    let samples = [
        (Command::Groundstate, "alpha = 0\np = 4\nomega = 2\n"),
        (Command::Evolve, MINIMAL_EVOLVE),
        (Command::BlowupDemo, "alpha = 0.5\np = 4\nomega = 2\n"),
        (Command::VirialScan, "alpha = 0\np = 4\nvirial_radii = 5, 10\n"),
        (Command::Inequalities, "members = 7\n"),
        (
            Command::Spectrum,
            "alpha = -0.1\nshifts = 1, 4, 9\nlambda_ref = 9.5\n",
        ),
    ];
    for (cmd, text) in samples {
        let first = JobConfig::parse(cmd, text).unwrap();
        let emitted = first.emit();
        let second = JobConfig::parse(cmd, &emitted).unwrap();
        assert_eq!(first, second, "{cmd}");
        assert_eq!(emitted, second.emit(), "{cmd}");
        for key in KEYS {
            assert!(emitted.contains(&format!("\n{key} = ")), "{cmd} misses {key}");
        }
    }
}

#[test]
fn unknown_and_duplicate_keys() {
    let (line, msg) = config_error(JobConfig::parse(Command::Spectrum, "alpha = 0\nbeta = 1\n"));
    assert_eq!(line, 2);
    assert!(msg.contains("unknown key"), "{msg}");

    let (line, msg) = config_error(JobConfig::parse(Command::Spectrum, "alpha = 0\n\nalpha = 1\n"));
    assert_eq!(line, 3);
    assert!(msg.contains("duplicate key"), "{msg}");
}

#[test]
fn missing_mandatory_key() {
    let (line, msg) = config_error(JobConfig::parse(Command::Groundstate, "alpha = 0\np = 3\n"));
    assert_eq!(line, 0);
    assert!(msg.contains("omega"), "{msg}");
}

#[test]
fn malformed_values() {
    let bad = [
        "alpha = x\n",
        "alpha = 0\nn_points = -4\n",
        "alpha = 0\nn_points = 8\n",
        "alpha = 0\nlambda_ref = 0.1\n",
        "alpha = 0\nshifts = 1, two\n",
        "alpha\n",
    ];
    for text in bad {
        assert!(
            matches!(
                JobConfig::parse(Command::Spectrum, text),
                Err(Error::Config { .. })
            ),
            "{text:?}"
        );
    }
    let (_, msg) = config_error(JobConfig::parse(
        Command::Groundstate,
        "alpha = 0\np = 3\nomega = 1\n",
    ));
    assert!(msg.contains("omega"), "{msg}");
}

#[test]
fn overrides_win_and_report_line_zero() {
    let job = JobConfig::parse_with_overrides(
        Command::Evolve,
        MINIMAL_EVOLVE,
        &["n_points=512".into(), "sign = defocusing".into()],
    )
    .unwrap();
    assert_eq!(job.sim.n_points, 512);
    assert_eq!(job.sim.sign, Sign::Defocusing);

    let (line, msg) = config_error(JobConfig::parse_with_overrides(
        Command::Evolve,
        MINIMAL_EVOLVE,
        &["p=0.5".into()],
    ));
    assert_eq!(line, 0);
    assert!(msg.contains("p > 1"), "{msg}");

    // An override supplies a mandatory key the file lacks.
    let job = JobConfig::parse_with_overrides(Command::Spectrum, "", &["alpha=0.2".into()]).unwrap();
    assert_eq!(job.sim.alpha, 0.2);
}

#[test]
fn comments_and_blank_lines() {
    let text = "# header\n\n  alpha = 0.1   # trailing\n\t\n";
    let job = JobConfig::parse(Command::Spectrum, text).unwrap();
    assert_eq!(job.sim.alpha, 0.1);
}

#[test]
fn command_names_round_trip() {
    for cmd in Command::ALL {
        assert_eq!(cmd.name().parse::<Command>().unwrap(), cmd);
    }
    assert!("blowup".parse::<Command>().is_err());
}

#[test]
fn shipped_configs_parse() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs");
    let files = [
        ("blowup.conf", Command::BlowupDemo),
        ("evolve_defocusing.conf", Command::Evolve),
        ("evolve_focusing_p2.conf", Command::Evolve),
        ("groundstate.conf", Command::Groundstate),
        ("inequalities.conf", Command::Inequalities),
        ("spectrum.conf", Command::Spectrum),
        ("virial_scan.conf", Command::VirialScan),
    ];
    for (name, cmd) in files {
        let text = std::fs::read_to_string(format!("{dir}/{name}")).unwrap();
        JobConfig::parse(cmd, &text).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}
