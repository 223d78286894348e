use std::path::PathBuf;
use std::process::Command;

use netdiscern::discern::Status;
use netdiscern::fixtures;
use netdiscern_cli::document::{Model, SpecDocument};
use netdiscern_cli::render::num;
use netdiscern_cli::report::{AtlasReport, Report, SimulationReport, WitnessReport};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_netdiscern")).args(args).output().unwrap();
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap(),
    )
}

fn analyze_json(path: &PathBuf) -> (Report, String, i32) {
    let (stdout, _, code) = run(&["analyze", path.to_str().unwrap(), "--format", "json"]);
    (serde_json::from_str(&stdout).unwrap(), stdout, code)
}

fn edit(name: &str, f: impl FnOnce(&mut serde_json::Value)) -> PathBuf {
    let text = std::fs::read_to_string(fixture(name)).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    f(&mut v);
    scratch(&format!("edited_{}_{}", std::process::id(), name), &v.to_string())
}

#[test]
fn fixture_files_match_library_examples() {
    let load = |n: &str| SpecDocument::load(&fixture(n)).unwrap().to_model().unwrap();
    assert_eq!(load("example1.json"), Model::Network(fixtures::example1()));
    assert_eq!(load("example2.json"), Model::Network(fixtures::example2()));
    assert_eq!(load("example3.json"), Model::Network(fixtures::example3()));
    assert_eq!(load("example4.json"), Model::Multiagent(fixtures::example4()));
}

#[test]
fn analyze_exit_codes() {
    for (name, code) in [("example1.json", 3), ("example2.json", 0), ("example3.json", 3), ("example4.json", 3)] {
        let (_, _, got) = run(&["analyze", fixture(name).to_str().unwrap()]);
        assert_eq!(got, code, "{name}");
    }
}

#[test]
fn example2_text_report() {
    let (stdout, _, code) = run(&["analyze", fixture("example2.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("verdict: Ψ-discernible"));
    assert!(stdout.contains("minimum sensor count hint: 2"));
}

#[test]
fn example3_witness_is_validated() {
    let (report, _, code) = analyze_json(&fixture("example3.json"));
    assert_eq!(code, 3);
    let w = report.verdict.witness.unwrap();
    assert!(w.validated);
    assert!(w.residual.unwrap() <= 1e-6);
    let net = report.network.unwrap();
    assert_eq!(net.reduced_system.status, Status::Indiscernible);
}

#[test]
fn example4_contrasts_legacy_and_corrected() {
    let (report, _, code) = analyze_json(&fixture("example4.json"));
    assert_eq!(code, 3);
    let legacy = report.multiagent.unwrap().legacy;
    assert!(legacy.all_hold);
    assert_eq!(legacy.corrected.status, Status::Indiscernible);
    let (text, _, _) = run(&["analyze", fixture("example4.json").to_str().unwrap()]);
    assert!(text.contains("all legacy conditions hold: true"));
    assert!(text.contains("verdict: not ensured"));
}

#[test]
fn json_report_round_trips_bit_exactly() {
    for name in ["example1.json", "example3.json", "example4.json"] {
        let (report, stdout, code) = analyze_json(&fixture(name));
        let again = serde_json::to_string_pretty(&report).unwrap() + "\n";
        assert_eq!(again, stdout, "{name}");
        let reparsed: Report = serde_json::from_str(&again).unwrap();
        assert_eq!(reparsed, report);
        assert_eq!(report.exit_code(), code);
    }
}

#[test]
fn text_and_json_carry_the_same_numbers() {
    let path = fixture("example3.json");
    let (report, _, _) = analyze_json(&path);
    let (text, _, _) = run(&["analyze", path.to_str().unwrap()]);
    let w = report.verdict.witness.unwrap();
    for x in w.x0.iter().chain(&w.x0_bar) {
        assert!(text.contains(&num(*x)), "{x} missing from text report");
    }
    assert!(text.contains(&num(w.residual.unwrap())));
}

#[test]
fn witness_command() {
    let (stdout, _, code) = run(&["witness", fixture("example3.json").to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, 3);
    let w: WitnessReport = serde_json::from_str(&stdout).unwrap();
    assert!(w.witness.unwrap().validated);

    let (stdout, _, code) = run(&["witness", fixture("example2.json").to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("no witness: discernible"));
}

#[test]
fn zero_output_always_has_a_witness() {
    let path = edit("example2.json", |v| v["C"] = serde_json::json!([[0, 0]]));
    let (_, _, code) = run(&["witness", path.to_str().unwrap()]);
    assert_eq!(code, 3);
}

#[test]
fn simulate_command() {
    let spec3 = fixture("example3.json");
    let corrected = scratch("x0_ex3.json", "[0, 1, 0, 0, 0, -1]");
    let corrected_bar = scratch("x0bar_ex3.json", "[0, 0, 0, 0, 0, -1]");
    let (stdout, _, code) = run(&[
        "simulate",
        spec3.to_str().unwrap(),
        "--x0",
        corrected.to_str().unwrap(),
        "--x0bar",
        corrected_bar.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let s: SimulationReport = serde_json::from_str(&stdout).unwrap();
    assert!(s.comparison.max_rel_dev <= 1e-8);
    assert_eq!(s.comparison.t_grid.len(), 201);

    let spec4 = fixture("example4.json");
    let x4 = scratch("x0_ex4.json", "[0, 0, 3, 0, 0, 0]");
    let zero = scratch("zero6.json", "[0, 0, 0, 0, 0, 0]");
    let (_, _, code) = run(&["simulate", spec4.to_str().unwrap(), "--x0", x4.to_str().unwrap(), "--x0bar", zero.to_str().unwrap()]);
    assert_eq!(code, 0);

    let spec2 = fixture("example2.json");
    let (_, _, code) = run(&["simulate", spec2.to_str().unwrap(), "--x0", zero.to_str().unwrap(), "--x0bar", zero.to_str().unwrap()]);
    assert_eq!(code, 0);
    let random = scratch("x0_random.json", "[0.3, -0.7, 0.1, 0.9, -0.4, 0.2]");
    let (stdout, _, code) = run(&["simulate", spec2.to_str().unwrap(), "--x0", random.to_str().unwrap(), "--x0bar", zero.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(stdout.contains("above threshold"));

    let short = scratch("short.json", "[1, 2]");
    let (_, stderr, code) = run(&["simulate", spec2.to_str().unwrap(), "--x0", short.to_str().unwrap(), "--x0bar", zero.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--x0"));
}

#[test]
fn atlas_command() {
    let (stdout, _, code) = run(&["atlas", fixture("example2.json").to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, 0);
    let a: AtlasReport = serde_json::from_str(&stdout).unwrap();
    let modified = &a.tables[1];
    assert_eq!(modified.rows.len(), 1);
    assert_eq!((modified.rows[0].alpha, modified.rows[0].theta, modified.rows[0].gamma), (3, 2, 2));
    assert!(a.tables.iter().all(|t| t.agrees));

    let empty = edit("example2.json", |v| v["L"] = serde_json::json!([[0, 0, 0], [0, 0, 0], [0, 0, 0]]));
    let (stdout, _, code) = run(&["atlas", empty.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("agreement: yes"));

    let (_, _, code) = run(&["atlas", fixture("example4.json").to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn invalid_specs_exit_2() {
    let unknown = edit("example2.json", |v| v["extra"] = serde_json::json!(1));
    let ragged = edit("example2.json", |v| v["A"] = serde_json::json!([[1, 0], [1]]));
    let same = edit("example2.json", |v| v["L_bar"] = v["L"].clone());
    let bad_sensor = edit("example2.json", |v| v["sensors"] = serde_json::json!([4]));
    let wrong_mode = edit("example2.json", |v| v["weights"] = serde_json::json!([[1, 2, 1.0]]));
    for p in [unknown, ragged, same, bad_sensor, wrong_mode] {
        let (_, stderr, code) = run(&["analyze", p.to_str().unwrap()]);
        assert_eq!(code, 2, "{}", p.display());
        assert!(stderr.starts_with("error: invalid spec"), "{stderr}");
    }
    let (_, _, code) = run(&["analyze", "/nonexistent/spec.json"]);
    assert_eq!(code, 2);
    let (_, stderr, code) = run(&["analyze", unknown_field_line().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("line 3"), "{stderr}");
}

fn unknown_field_line() -> PathBuf {
    scratch("unknown_line.json", "{\n  \"mode\": \"network\",\n  \"bogus\": 1\n}\n")
}

#[test]
fn settings_provenance() {
    let (r, _, _) = analyze_json(&fixture("example2.json"));
    assert_eq!(format!("{:?}", r.settings.tol_source), "Default");
    let with_tol = edit("example2.json", |v| v["tol"] = serde_json::json!(1e-9));
    let (r, _, _) = analyze_json(&with_tol);
    assert_eq!(r.settings.tol, 1e-9);
    assert_eq!(format!("{:?}", r.settings.tol_source), "Spec");
    let (stdout, _, _) = run(&["analyze", with_tol.to_str().unwrap(), "--format", "json", "--tol", "1e-7"]);
    let r: Report = serde_json::from_str(&stdout).unwrap();
    assert_eq!(r.settings.tol, 1e-7);
    assert_eq!(r.verdict.tolerance_used, 1e-7);
}

#[test]
fn method_flag() {
    for (m, direct, atlas) in [("direct", true, false), ("atlas", false, true), ("both", true, true)] {
        let (stdout, _, code) = run(&["analyze", fixture("example1.json").to_str().unwrap(), "--format", "json", "--method", m]);
        assert_eq!(code, 3);
        let r: Report = serde_json::from_str(&stdout).unwrap();
        let net = r.network.unwrap();
        assert_eq!(net.direct.is_some(), direct, "{m}");
        assert_eq!(net.lower_dimensional.is_some(), atlas, "{m}");
    }
    let (_, _, code) = run(&["analyze", fixture("example1.json").to_str().unwrap(), "--method", "bogus"]);
    assert_eq!(code, 2);
}
