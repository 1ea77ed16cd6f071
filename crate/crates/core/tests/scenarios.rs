use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;
use wavefront::runner::{run_random_suite, run_scenario, Check, Scenario};
use wavefront::Error;

fn scenario_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn run(name: &str, out: &Path) -> wavefront::runner::RunOutcome {
    let sc = Scenario::load(&scenario_dir().join(format!("{name}.toml"))).unwrap();
    run_scenario(&sc, Some(out)).unwrap()
}

fn report(out: &Path, check: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(out.join(format!("report_{check}.json"))).unwrap()).unwrap()
}

#[test]
fn every_example_scenario_passes() {
    for entry in fs::read_dir(scenario_dir()).unwrap() {
        let path = entry.unwrap().path();
        let dir = tempfile::tempdir().unwrap();
        let sc = Scenario::load(&path).unwrap();
        let outcome = run_scenario(&sc, Some(dir.path())).unwrap();
        assert!(outcome.passed, "{} failed: {:?}", path.display(), outcome.checks);
        assert_eq!(outcome.exit_code(), 0);
        for f in &outcome.files {
            assert!(f.exists(), "{} missing", f.display());
        }
    }
}

#[test]
fn minimal_scenario_has_all_zero_terms() {
    let dir = tempfile::tempdir().unwrap();
    let outcome = run("minimal", dir.path());
    assert_eq!(outcome.checks.len(), 1);
    let r = report(dir.path(), "l1_identity");
    for key in ["net_change", "lax_term", "slow_fast_term", "rs_term", "residual"] {
        assert_eq!(r[key].as_f64(), Some(0.0), "{key}");
    }
}

#[test]
fn slow_undercompressive_scenario_reports_rate_three() {
    let dir = tempfile::tempdir().unwrap();
    run("slow_uc", dir.path());
    let r = report(dir.path(), "weighted_identity");
    // t - s = 1, so the integrated terms equal the rates
    assert_eq!(r["slow_fast_term"].as_f64(), Some(3.0));
    assert_eq!(r["net_change"].as_f64(), Some(-3.0));
    assert_eq!(r["exact"].as_bool(), Some(true));
    let t51 = report(dir.path(), "theorem51");
    assert_eq!(t51["product_i"].as_f64(), Some(3.0));
}

#[test]
fn artifacts_are_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = run("funnel", a.path());
    run("funnel", b.path());
    for f in &first.files {
        let name = f.file_name().unwrap();
        if name == "summary.json" {
            continue; // contains the output paths
        }
        assert_eq!(fs::read(f).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name:?}");
    }
    let s1 = run_random_suite(1, 99).unwrap().to_json();
    let s2 = run_random_suite(1, 99).unwrap().to_json();
    assert_eq!(s1, s2);
}

#[test]
fn random_suite_passes() {
    let summary = run_random_suite(20, 5).unwrap();
    assert_eq!(summary.passes, 20, "{:?}", summary.entries);
}

#[test]
fn invalid_configs_name_the_field() {
    let text = fs::read_to_string(scenario_dir().join("lax.toml")).unwrap();
    let cases = [
        ("h = [0.1]", "h = [0]", "h[0]"),
        ("t = 1", "t = -1", "t"),
        ("name = \"burgers\"", "name = \"nope\"", "flux.name"),
        ("checks = [", "m = -1\nchecks = [", "m"),
    ];
    for (from, to, path) in cases {
        match Scenario::from_toml(&text.replacen(from, to, 1)) {
            Err(Error::Config { path: p, .. }) => assert_eq!(p, path),
            other => panic!("{to}: expected config error, got {other:?}"),
        }
    }
}

#[test]
fn coincident_fronts_surface_the_perturbation_hint() {
    let text = fs::read_to_string(scenario_dir().join("lax.toml"))
        .unwrap()
        .replace("[u2]\nleft = 0", "[u2]\nleft = 1\nbreakpoints = [[0, -1]]");
    let sc = Scenario::from_toml(&text).unwrap();
    assert_eq!(sc.checks[0], Check::L1Identity);
    let dir = tempfile::tempdir().unwrap();
    let err = run_scenario(&sc, Some(dir.path())).unwrap_err();
    assert!(matches!(err, Error::CoincidentFronts { .. }));
    assert!(err.to_string().contains("perturb"));
}
