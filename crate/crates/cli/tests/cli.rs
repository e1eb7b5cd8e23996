use std::path::PathBuf;
use std::process::{Command, Output};

fn zdgq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zdgq")).args(args).env_remove("ZDGQ_DENSE_CAP").output().expect("spawn zdgq")
}

fn stdout(args: &[&str]) -> String {
    let out = zdgq(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares against a golden file; `ZDGQ_BLESS=1` rewrites it.
fn check_golden(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("ZDGQ_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap();
    assert!(want == actual, "{name} differs from golden output");
}

#[test]
fn analyze_json_matches_goldens() {
    for n in ["8", "18", "27"] {
        let out = stdout(&["analyze", n, "--json", "--no-numeric"]);
        check_golden(&format!("analyze_{n}.json"), &out);
        assert_eq!(out, stdout(&["analyze", n, "--json", "--no-numeric"]), "not byte-stable");
    }
}

#[test]
fn scan_json_matches_golden() {
    check_golden("scan_4_60.json", &stdout(&["scan", "4", "60", "--json", "--no-numeric", "--jobs", "2"]));
}

#[test]
fn analyze_18_reports_symmetry_failure() {
    let doc: serde_json::Value = serde_json::from_str(&stdout(&["analyze", "18", "--json"])).unwrap();
    let pairs = doc["pairs"].as_array().unwrap();
    let found: Vec<_> = pairs.iter().map(|p| (p["pair"].clone(), p["verdict"].as_str().unwrap())).collect();
    assert_eq!(found, [(serde_json::json!([3, 15]), "None"), (serde_json::json!([6, 12]), "None")]);
    for p in pairs {
        let msg = p["justification"][0]["message"].as_str().unwrap();
        assert!(msg.starts_with("symmetry condition fails"), "{msg}");
    }
}

#[test]
fn analyze_8_reports_pst_time() {
    let out = stdout(&["analyze", "8"]);
    assert!(out.contains("pair (2, 6): PST at tau = pi/sqrt(2) ~ 2.22144146908"), "{out}");
    assert!(out.contains("(confirmed)"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["analyze", "7"][..],
        &["analyze", "3"],
        &["scan", "10", "5"],
        &["scan", "2", "10"],
        &["verify", "no-such-check"],
        &["walk", "18", "--pair", "3,5", "--time", "1"],
        &["analyze"],
    ] {
        assert_eq!(zdgq(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_passes_and_exit_codes() {
    for args in [
        &["verify", "quartic", "--pmax", "50", "--qmax", "50"][..],
        &["verify", "spectrum-thm", "--nmax", "300"],
        &["verify", "counterexample-p2k14"],
    ] {
        let out = stdout(args);
        assert!(out.contains(": pass"), "{out}");
    }
}

#[test]
fn dense_cap_env_disables_numerics() {
    let out = Command::new(env!("CARGO_BIN_EXE_zdgq"))
        .args(["analyze", "18", "--json"])
        .env("ZDGQ_DENSE_CAP", "5")
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["numeric"], false);
}

#[test]
fn scan_pst_membership() {
    let out = stdout(&["scan", "4", "100", "--filter", "pst", "--csv"]);
    let ns: Vec<u64> = out.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(ns, [6, 8, 9, 15, 21, 33, 39, 51, 57, 69, 87, 93]);
    assert_eq!(out.lines().next().unwrap(), "n,vertex_count,xi,candidates,verdict,tau_min,justification");
}

#[test]
fn scan_fr_includes_27() {
    let out = stdout(&["scan", "4", "50", "--filter", "fr"]);
    assert!(out.lines().any(|l| l.starts_with("27,") && l.contains("ProperFR") && l.contains("2*pi/7")), "{out}");
}

#[test]
fn scan_single_composite() {
    let out = stdout(&["scan", "4", "4"]);
    assert_eq!(out.lines().count(), 2);
    assert!(out.lines().nth(1).unwrap().starts_with("4,1,1,0,None"));
}

#[test]
fn scan_is_invariant_under_jobs() {
    let one = stdout(&["scan", "4", "150", "--jobs", "1"]);
    for j in ["2", "4", "7"] {
        assert_eq!(one, stdout(&["scan", "4", "150", "--jobs", j]), "jobs = {j}");
    }
}

#[test]
fn walk_prints_raw_amplitudes() {
    let t = (2.0 * std::f64::consts::PI / 7.0).to_string();
    let out = stdout(&["walk", "27", "--pair", "9,18", "--time", &t]);
    assert!(out.contains("|alpha| = 0.623489801859, |beta| = 0.781831482468"), "{out}");
    assert!(out.contains("kind: proper FR"));
}
