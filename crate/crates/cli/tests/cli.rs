use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use orbitdim::state_file::{parse_state, sha256_hex, LoadedState, StateFile};
use serde_json::Value;
use tempfile::TempDir;

fn orbitdim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitdim")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn fock(dir: &TempDir, name: &str, occ: &[u32]) -> PathBuf {
    let text = format!(
        r#"{{"modes": {}, "kind": "ket", "terms": [{{"occ": {:?}, "re": 1.0, "im": 0.0}}]}}"#,
        occ.len(),
        occ
    );
    write(dir, name, &text)
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn vacuum_under_passive_optics_has_dimension_zero() {
    let dir = TempDir::new().unwrap();
    let vac = fock(&dir, "vac.json", &[0, 0]);
    let o = orbitdim(&["dim", "--state", p(&vac), "--group", "plo"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("dimension: 0\n"), "{}", stdout(&o));
}

#[test]
fn two_photon_state_gaussian_ketbra_dimension() {
    let dir = TempDir::new().unwrap();
    let f = fock(&dir, "f11.json", &[1, 1]);
    let o = orbitdim(&["--json", "dim", "--state", p(&f), "--group", "go", "--picture", "ketbra"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], "orbitdim.report/1");
    assert_eq!(v["result"]["dimension"], 12);
    assert_eq!(v["result"]["basis_size"], 15);
    assert_eq!(v["input_sha256"], sha256_hex(&fs::read(&f).unwrap()));
    assert_eq!(v["tolerance"]["policy"], "relative");
}

#[test]
fn structured_reports_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let f = fock(&dir, "f.json", &[2, 0, 1]);
    for args in [
        vec!["--json", "gram", "--state", p(&f), "--group", "dplo"],
        vec!["--json", "table2", "--m-max", "2"],
        vec!["--json", "generic", "--group", "go", "--m", "2", "--N", "2", "--seeds", "4"],
    ] {
        let (a, b) = (orbitdim(&args), orbitdim(&args));
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn absolute_tolerance_is_reported() {
    let dir = TempDir::new().unwrap();
    let f = fock(&dir, "f.json", &[1]);
    let v = json(&orbitdim(&["--json", "--tol", "1e-6", "dim", "--state", p(&f), "--group", "go"]));
    assert_eq!(v["tolerance"]["policy"], "absolute");
    assert_eq!(v["result"]["spectrum"]["tolerance_used"], 1e-6);
    let bad = orbitdim(&["--tol", "-1", "dim", "--state", p(&f), "--group", "go"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn malformed_files_exit_with_invalid_input() {
    let dir = TempDir::new().unwrap();
    let syntax = write(&dir, "syntax.json", "{\n  \"modes\": 1,\n  \"kind\": \"ket\",\n  \"terms\": [oops]\n}\n");
    let o = orbitdim(&["dim", "--state", p(&syntax), "--group", "go"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));

    let duplicate = write(
        &dir,
        "dup.json",
        r#"{"modes": 1, "kind": "ket", "terms": [
            {"occ": [1], "re": 0.6, "im": 0.0}, {"occ": [1], "re": 0.8, "im": 0.0}]}"#,
    );
    assert_eq!(orbitdim(&["dim", "--state", p(&duplicate), "--group", "go"]).status.code(), Some(2));

    let unnormalized = write(&dir, "norm.json", r#"{"modes": 1, "kind": "ket", "terms": [{"occ": [1], "re": 0.5, "im": 0.0}]}"#);
    let o = orbitdim(&["dim", "--state", p(&unnormalized), "--group", "go"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("norm"), "{}", stderr(&o));

    let wrong_length = write(&dir, "len.json", r#"{"modes": 2, "kind": "ket", "terms": [{"occ": [1], "re": 1.0, "im": 0.0}]}"#);
    assert_eq!(orbitdim(&["dim", "--state", p(&wrong_length), "--group", "go"]).status.code(), Some(2));

    let missing = dir.path().join("absent.json");
    assert_eq!(orbitdim(&["dim", "--state", p(&missing), "--group", "go"]).status.code(), Some(2));
}

#[test]
fn picture_mismatch_exits_three() {
    let dir = TempDir::new().unwrap();
    let ket = fock(&dir, "ket.json", &[1]);
    assert_eq!(orbitdim(&["dim", "--state", p(&ket), "--group", "go", "--picture", "mixed"]).status.code(), Some(3));
    let density = write(
        &dir,
        "rho.json",
        r#"{"modes": 1, "kind": "density", "entries": [
            {"bra": [0], "ket": [0], "re": 0.5, "im": 0.0}, {"bra": [1], "ket": [1], "re": 0.5, "im": 0.0}]}"#,
    );
    assert_eq!(orbitdim(&["dim", "--state", p(&density), "--group", "go", "--picture", "ket"]).status.code(), Some(3));
    assert_eq!(orbitdim(&["witness", "--state", p(&density)]).status.code(), Some(3));
    let o = orbitdim(&["dim", "--state", p(&density), "--group", "go", "--picture", "mixed"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn closure_verdicts() {
    let o = orbitdim(&["closure", "--group", "go", "--m", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: PASS"));
    let v = json(&orbitdim(&["--json", "closure", "--group", "plo", "--m", "2"]));
    assert!(v["result"]["max_residual"].as_f64().unwrap() < 1e-10);
    // The active basis has no identity element to absorb [s_k, S_k].
    let o = orbitdim(&["closure", "--group", "alo", "--m", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("verdict: FAIL"));
}

#[test]
fn table_csv_layout() {
    let o = orbitdim(&["table2", "--m-max", "1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("family,group,picture,m,params,closed_form,numerical,exactness,pass"));
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| !r.starts_with("noon")));
    assert!(rows.iter().all(|r| r.ends_with(",true")));
}

#[test]
fn table_text_marks_bounds() {
    let o = orbitdim(&["table2", "--m-max", "2"]);
    let text = stdout(&o);
    assert!(text.contains("≤"));
    assert!(text.contains("noon"));
    // Superpositions with an occupied second mode exceed the tabulated ket value by one.
    assert_eq!(o.status.code(), Some(1));
    let v = json(&orbitdim(&["--json", "table2", "--m-max", "2"]));
    for row in v["result"]["rows"].as_array().unwrap().iter().filter(|r| r["pass"] == false) {
        assert_eq!(row["family"], "one-mode-superposition");
        assert_eq!(row["picture"], "ket");
        assert_eq!(row["numerical"].as_u64().unwrap(), row["closed_form"].as_u64().unwrap() + 1);
    }
}

#[test]
fn cnot_demo_dimensions() {
    let o = orbitdim(&["cnot-demo"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&orbitdim(&["--json", "cnot-demo"]));
    assert_eq!(v["result"]["dimensions"], serde_json::json!([38, 37]));
    assert_eq!(v["result"]["excluded"], true);
    let v = json(&orbitdim(&["--json", "cnot-demo", "--group", "plo"]));
    assert_eq!(v["result"]["dimensions"], serde_json::json!([10, 9]));
}

#[test]
fn generic_runs() {
    let v = json(&orbitdim(&["--json", "generic", "--group", "go", "--m", "2", "--N", "2"]));
    assert_eq!(v["result"]["expected"], 15);
    assert_eq!(v["result"]["hits"], 20);
    let o = orbitdim(&["generic", "--group", "plo", "--m", "3", "--N", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("vacuum only: dimension 0"), "{}", stdout(&o));
    let v = json(&orbitdim(&["--json", "generic", "--group", "dplo", "--m", "2", "--N", "2", "--picture", "ketbra"]));
    assert_eq!(v["result"]["expected"], 8);
    assert_eq!(v["result"]["hits"], 20);
    assert_eq!(orbitdim(&["generic", "--group", "go", "--m", "1", "--N", "1", "--picture", "mixed"]).status.code(), Some(3));
}

#[test]
fn witness_output() {
    let dir = TempDir::new().unwrap();
    let f = fock(&dir, "f11.json", &[1, 1]);
    let o = orbitdim(&["witness", "--state", p(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("witnessed: true (12 > 10)"), "{}", stdout(&o));
    let vac = fock(&dir, "vac.json", &[0, 0]);
    assert!(stdout(&orbitdim(&["witness", "--state", p(&vac)])).starts_with("witnessed: false (10 <= 10)"));
}

#[test]
fn estimate_matches_direct_gram() {
    let dir = TempDir::new().unwrap();
    let rho = write(&dir, "one.json", r#"{"modes": 1, "kind": "density", "entries": [{"bra": [1], "ket": [1], "re": 1.0, "im": 0.0}]}"#);
    let o = orbitdim(&["--json", "estimate", "--state", p(&rho), "--group", "go", "--detail"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!(v["result"]["max_deviation"].as_f64().unwrap() < 1e-4);
    assert_eq!(v["result"]["entries"].as_array().unwrap().len(), 36);
    // Pure kets are accepted and treated as their projector.
    let ket = fock(&dir, "ket.json", &[1]);
    assert_eq!(orbitdim(&["estimate", "--state", p(&ket), "--group", "plo"]).status.code(), Some(0));
}

#[test]
fn estimate_leakage_exits_four() {
    let dir = TempDir::new().unwrap();
    let ket = fock(&dir, "ket.json", &[2]);
    let o = orbitdim(&["estimate", "--state", p(&ket), "--group", "go", "--buffer", "1", "--h", "0.5"]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    assert!(stderr(&o).contains("leak"), "{}", stderr(&o));
}

#[test]
fn sample_round_trip() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("s.json");
    let o = orbitdim(&["--seed", "7", "--json", "sample", "--m", "2", "--N", "3", "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let bytes = fs::read(&out).unwrap();
    assert_eq!(v["result"]["sha256"], sha256_hex(&bytes));
    assert_eq!(v["result"]["terms"], 10);
    let LoadedState::Ket(psi) = parse_state(std::str::from_utf8(&bytes).unwrap()).unwrap() else {
        panic!("sampled a density")
    };
    assert!((psi.norm() - 1.0).abs() < 1e-12);
    // Writing the parsed state reproduces the file byte for byte.
    assert_eq!(StateFile::from_ket(&psi).to_json().as_bytes(), &bytes[..]);
    // Same seed, same state; the embedded copy matches the file.
    let v = json(&orbitdim(&["--seed", "7", "--json", "sample", "--m", "2", "--N", "3"]));
    assert_eq!(v["result"]["sha256"], sha256_hex(&bytes));
    let other = json(&orbitdim(&["--seed", "8", "--json", "sample", "--m", "2", "--N", "3"]));
    assert_ne!(other["result"]["sha256"], v["result"]["sha256"]);
    let sampled = orbitdim(&["dim", "--state", p(&out), "--group", "go"]);
    assert!(stdout(&sampled).starts_with("dimension: 15\n"), "{}", stdout(&sampled));
}

#[test]
fn inputs_are_not_modified() {
    let dir = TempDir::new().unwrap();
    let f = fock(&dir, "f.json", &[1, 0, 1]);
    let before = fs::read(&f).unwrap();
    for args in [
        vec!["dim", "--state", p(&f), "--group", "go"],
        vec!["gram", "--state", p(&f), "--group", "alo"],
        vec!["witness", "--state", p(&f)],
        vec!["estimate", "--state", p(&f), "--group", "plo"],
    ] {
        orbitdim(&args);
        assert_eq!(fs::read(&f).unwrap(), before, "{args:?}");
    }
}

#[test]
fn state_files_round_trip_exactly() {
    use orbitdim_core::dynamics::sample_sphere_state;
    use orbitdim_core::outer;
    for seed in 0..40 {
        let psi = sample_sphere_state(1 + (seed % 3) as usize, 1 + (seed % 4) as u32, seed).unwrap();
        let rho = outer(&psi).unwrap();
        for file in [StateFile::from_ket(&psi), StateFile::from_density(&rho)] {
            let text = file.to_json();
            let again = StateFile::from_state(&parse_state(&text).unwrap()).to_json();
            assert_eq!(text, again, "seed {seed}");
        }
    }
}
