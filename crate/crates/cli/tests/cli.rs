//! Runs the `ptower` binary on configs and suites and checks exit codes,
//! report contents and determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn ptower(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptower"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn examples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples")
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

/// Runs with `--json` and returns the exit code and parsed report.
fn report(args: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let mut all = args.to_vec();
    let out_s = out.display().to_string();
    all.extend(["--json", &out_s]);
    let o = ptower(&all);
    let code = o.status.code().unwrap();
    let text = std::fs::read_to_string(&out)
        .unwrap_or_else(|_| panic!("no report: {}", String::from_utf8_lossy(&o.stderr)));
    (code, serde_json::from_str(&text).unwrap())
}

fn record<'a>(r: &'a Value, name: &str) -> &'a Value {
    r["records"]
        .as_array()
        .unwrap()
        .iter()
        .find(|x| x["name"] == name)
        .unwrap_or_else(|| panic!("no record {name}"))
}

#[test]
fn counterexample_suite_values() {
    let (code, r) = report(&["verify", "counterexample"]);
    assert_eq!(code, 0);
    assert_eq!(record(&r, "H0(trivial group, M)")["computed"], 2);
    assert_eq!(r["records"][0]["computed"], serde_json::json!([0, 0]));
    assert_eq!(r["summary"]["fail"], 0);
}

#[test]
fn lemma_suite_passes() {
    let (code, r) = report(&["verify", "lemma-h1"]);
    assert_eq!(code, 0);
    assert!(r["summary"]["pass"].as_u64().unwrap() >= 50);
}

#[test]
fn fast_suites_pass() {
    for s in [
        "exponents-paper",
        "lefschetz-signs",
        "oracle",
        "prop-uniform",
    ] {
        let o = ptower(&["verify", s]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{s}: {}",
            String::from_utf8_lossy(&o.stdout)
        );
    }
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = examples().join("sl2-kernel.json").display().to_string();
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let out = dir.path().join(format!("r{i}.json")).display().to_string();
            assert_eq!(
                ptower(&["verify", "--config", &cfg, "--json", &out])
                    .status
                    .code(),
                Some(0)
            );
            std::fs::read(&out).unwrap()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn shipped_examples_pass() {
    for entry in std::fs::read_dir(examples()).unwrap() {
        let path = entry.unwrap().path().display().to_string();
        let o = ptower(&["verify", "--config", &path]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{path}: {}",
            String::from_utf8_lossy(&o.stdout)
        );
    }
}

#[test]
fn bad_configs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (
            "unknown.json",
            r#"{"kind": "lattice", "matrix": [[-1]], "colour": "red"}"#,
        ),
        ("kind.json", r#"{"kind": "manifold"}"#),
        ("syntax.json", "{"),
        ("square.json", r#"{"kind": "lattice", "matrix": [[1, 0]]}"#),
        (
            "ell.json",
            r#"{"kind": "lattice", "matrix": [[-1]], "p": 3, "ell": 3}"#,
        ),
        (
            "action.json",
            r#"{"kind": "finite-group", "group": {"type": "abelian", "moduli": [9]}, "action": {"type": "transpose-inverse"}}"#,
        ),
        (
            "orders.json",
            r#"{"kind": "finite-group", "group": {"type": "abelian", "moduli": [9, 25]}, "action": {"type": "inversion"}}"#,
        ),
    ];
    for (name, text) in cases {
        let path = write(&dir, name, text);
        let o = ptower(&["verify", "--config", &path]);
        assert_eq!(o.status.code(), Some(2), "{name}");
        assert!(!o.stderr.is_empty(), "{name}: no diagnostics");
    }
    assert_eq!(
        ptower(&["verify", "--config", "/nonexistent/config.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(ptower(&["verify", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(ptower(&["verify"]).status.code(), Some(2));
    assert_eq!(ptower(&["h1"]).status.code(), Some(2));
}

#[test]
fn wrong_kind_for_command_is_a_usage_error() {
    let cfg = examples().join("exponents.json").display().to_string();
    assert_eq!(ptower(&["h1", "--config", &cfg]).status.code(), Some(2));
    let lattice = examples()
        .join("lattice-inversion.json")
        .display()
        .to_string();
    assert_eq!(
        ptower(&["series", "--config", &lattice]).status.code(),
        Some(2)
    );
    assert_eq!(
        ptower(&["exponents", "--config", &lattice]).status.code(),
        Some(2)
    );
}

#[test]
fn exponent_rows() {
    let cfg = examples().join("exponents.json").display().to_string();
    let (code, r) = report(&["exponents", "--config", &cfg]);
    assert_eq!(code, 0);
    let rows = r["records"].as_array().unwrap();
    assert_eq!(rows[1]["computed"]["exponent"], "1/2");
    assert_eq!(rows[1]["computed"]["vcd"], 3);
    assert_eq!(rows[2]["computed"]["start_degree"], 3);
    assert_eq!(rows[3]["computed"]["exponent"], "1/3");
}

#[test]
fn empty_exponent_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "empty.json", r#"{"kind": "exponent", "rows": []}"#);
    let (code, r) = report(&["exponents", "--config", &path]);
    assert_eq!(code, 0);
    assert_eq!(r["records"], serde_json::json!([]));
}

#[test]
fn failing_row_does_not_stop_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"kind": "exponent", "rows": [
        {"type": "basechange", "group": {"family": "sl", "n": 3},
         "field": {"degree": 1, "real_places": 1, "complex_places": 0}, "extension_degree": 2},
        {"type": "theorem1", "dim_fixed": 4, "lambda": 0, "dim_g": 8, "alpha": "1/2", "expected": "1/4"}
    ]}"#;
    let path = write(&dir, "rows.json", text);
    let (code, r) = report(&["exponents", "--config", &path]);
    assert_eq!(code, 1);
    assert_eq!(r["records"][0]["status"], "fail");
    assert_eq!(r["records"][1]["status"], "pass");
}

#[test]
fn mismatched_expectation_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        &dir,
        "wrong.json",
        r#"{"kind": "lattice", "matrix": [[-1]], "expected": {"h1_classes": 3}}"#,
    );
    assert_eq!(
        ptower(&["verify", "--config", &path]).status.code(),
        Some(1)
    );
}

#[test]
fn h1_and_series_commands() {
    let lattice = examples()
        .join("lattice-inversion.json")
        .display()
        .to_string();
    let (code, r) = report(&["h1", "--config", &lattice]);
    assert_eq!(code, 0);
    assert_eq!(record(&r, "H1")["computed"]["classes"], 2);

    let kernel = examples().join("sl2-kernel.json").display().to_string();
    let (code, r) = report(&["series", "--config", &kernel]);
    assert_eq!(code, 0);
    assert_eq!(
        record(&r, "lower p-series")["computed"]["orders"],
        serde_json::json!([729, 27, 1])
    );

    let dir = tempfile::tempdir().unwrap();
    let trivial = write(
        &dir,
        "trivial.json",
        r#"{"kind": "finite-group", "group": {"type": "matrix-generators", "p": 3, "k": 1,
            "generators": [[[1, 0], [0, 1]]]}, "action": {"type": "trivial", "order": 2}}"#,
    );
    let (_, r) = report(&["h1", "--config", &trivial]);
    assert_eq!(record(&r, "H1")["computed"]["classes"], 1);
    let (_, r) = report(&["series", "--config", &trivial]);
    assert_eq!(
        record(&r, "lower p-series")["computed"]["orders"],
        serde_json::json!([1])
    );
}

#[test]
fn cap_is_enforced() {
    let kernel = examples().join("sl2-kernel.json").display().to_string();
    let o = ptower(&["series", "--config", &kernel, "--cap", "100"]);
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_ptower"))
        .args(["series", "--config", &kernel])
        .env("PTOWER_ELEMENT_CAP", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn schema_is_valid_json() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/config.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(
        schema["$defs"]["finiteGroup"]["properties"]["kind"]["const"],
        "finite-group"
    );
}

#[test]
fn enumeration_suites_pass() {
    for s in ["adem", "counting"] {
        let (code, r) = report(&["verify", s]);
        assert_eq!(code, 0, "{s}");
        assert_eq!(r["summary"]["fail"], 0, "{s}");
    }
}
