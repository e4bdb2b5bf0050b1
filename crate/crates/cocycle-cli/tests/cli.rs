//! End-to-end tests driving the compiled binary.

use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cocycle"))
        .args(args)
        .env_remove("COCYCLE_SEED")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is valid JSON")
}

fn temp_file(name: &str, content: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("cocycle-cli-test-{}-{name}", std::process::id()));
    std::fs::write(&path, content).unwrap();
    path
}

#[test]
fn irreps_s3_reports_three_with_dims_1_1_2() {
    let out = run(&["irreps", "--group", "builtin:s3"]);
    let json = stdout_json(&out);
    let irreps = json.as_array().unwrap();
    assert_eq!(irreps.len(), 3);
    let dims: Vec<u64> = irreps.iter().map(|r| r["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![1, 1, 2]);
    for rep in irreps {
        assert_eq!(rep["matrices"].as_array().unwrap().len(), 6);
    }
}

#[test]
fn verify_sign_character_is_exact_and_byte_stable() {
    let f = temp_file("sign.json", "{\"values\": [[1.0, 0.0], [-1.0, 0.0]]}");
    let out = run(&[
        "verify",
        "--group",
        "builtin:z2",
        "--equation",
        "dalembert",
        "--function",
        f.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    // The machine interface is exactly these keys in this order.
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "{\"max_residual\":0.0000000000000000e0,\"argmax\":[0,0],\"satisfied\":true}\n"
    );
}

#[test]
fn verify_wilson_requires_companion() {
    let f = temp_file("wf.json", "{\"values\": [[1.0, 0.0], [1.0, 0.0]]}");
    let out = run(&[
        "verify",
        "--group",
        "builtin:z2",
        "--equation",
        "wilson",
        "--function",
        f.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(64));
    let out = run(&[
        "verify",
        "--group",
        "builtin:z2",
        "--equation",
        "wilson",
        "--function",
        f.to_str().unwrap(),
        "--companion",
        f.to_str().unwrap(),
    ]);
    let json = stdout_json(&out);
    assert_eq!(json["satisfied"], Value::Bool(true));
}

#[test]
fn solve_q8_returns_five_solutions() {
    let out = run(&["solve", "--group", "builtin:q8", "--equation", "dalembert"]);
    let json = stdout_json(&out);
    assert_eq!(json["equation"], "dalembert");
    assert_eq!(json["group"], "builtin:q8");
    let solutions = json["solutions"].as_array().unwrap();
    assert_eq!(solutions.len(), 5);
    for s in solutions {
        assert!(s["residual"].as_f64().unwrap() <= 1e-9);
        let kind = s["witness"]["kind"].as_str().unwrap();
        assert!(kind == "character_pair" || kind == "su2_irrep");
    }
    assert!(json.get("wilson_spaces").is_none());
    assert!(json.get("oracle").is_none());
}

#[test]
fn solve_wilson_includes_spaces() {
    let out = run(&["solve", "--group", "builtin:q8", "--equation", "wilson"]);
    let json = stdout_json(&out);
    let spaces = json["wilson_spaces"].as_array().unwrap();
    assert_eq!(spaces.len(), 5);
    let dims: Vec<u64> = spaces
        .iter()
        .map(|s| s["dimension"].as_u64().unwrap())
        .collect();
    assert_eq!(dims.iter().filter(|&&d| d == 1).count(), 4);
    assert_eq!(dims.iter().filter(|&&d| d == 4).count(), 1);
    for s in spaces {
        assert_eq!(
            s["basis"].as_array().unwrap().len(),
            s["dimension"].as_u64().unwrap() as usize
        );
    }
}

#[test]
fn solve_with_oracle_matches_everything() {
    let out = run(&[
        "solve",
        "--group",
        "builtin:s3",
        "--equation",
        "long",
        "--oracle",
        "--starts",
        "200",
        "--seed",
        "5",
    ]);
    let json = stdout_json(&out);
    let oracle = &json["oracle"];
    assert_eq!(oracle["starts"], 200);
    assert_eq!(oracle["unmatched"], 0);
    assert_eq!(
        oracle["matched"].as_u64().unwrap(),
        json["solutions"].as_array().unwrap().len() as u64
    );
}

#[test]
fn lemma_q8_two_dim_concludes_su2() {
    let out = run(&["lemma", "--group", "builtin:q8", "--irrep", "4"]);
    let json = stdout_json(&out);
    assert_eq!(json["hypothesis_holds"], Value::Bool(true));
    assert_eq!(json["conclusion"], "dim2_su2");
    assert_eq!(json["witnesses"].as_array().unwrap().len(), 2);

    let out = run(&["lemma", "--group", "builtin:s3", "--irrep", "2"]);
    let json = stdout_json(&out);
    assert_eq!(json["hypothesis_holds"], Value::Bool(false));
    assert_eq!(json["conclusion"], "not_applicable");

    let out = run(&["lemma", "--group", "builtin:q8", "--irrep", "99"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn fourier_accepts_exported_basis() {
    let basis_out = run(&["irreps", "--group", "builtin:z4", "--seed", "11"]);
    assert!(basis_out.status.success());
    let basis_file = temp_file(
        "z4-basis.json",
        &String::from_utf8(basis_out.stdout).unwrap(),
    );
    let f = temp_file(
        "z4-f.json",
        "{\"values\": [[1.0, 0.0], [2.0, 0.5], [0.0, 0.0], [-1.0, 0.25]]}",
    );
    let with_basis = run(&[
        "fourier",
        "--group",
        "builtin:z4",
        "--function",
        f.to_str().unwrap(),
        "--basis",
        basis_file.to_str().unwrap(),
    ]);
    let recomputed = run(&[
        "fourier",
        "--group",
        "builtin:z4",
        "--function",
        f.to_str().unwrap(),
        "--seed",
        "11",
    ]);
    assert!(with_basis.status.success());
    assert_eq!(with_basis.stdout, recomputed.stdout);
    let json = stdout_json(&with_basis);
    assert_eq!(json["blocks"].as_array().unwrap().len(), 4);
}

#[test]
fn group_file_round_trip_gives_identical_solver_output() {
    use cocycle::formats::group_to_json;
    use cocycle::group::Group;
    let d4 = Group::dihedral(4).unwrap();
    let file = temp_file("d4.json", &group_to_json(&d4).render());
    let from_file = run(&[
        "solve",
        "--group",
        file.to_str().unwrap(),
        "--equation",
        "dalembert",
        "--seed",
        "42",
    ]);
    let from_builtin = run(&[
        "solve",
        "--group",
        "builtin:d4",
        "--equation",
        "dalembert",
        "--seed",
        "42",
    ]);
    let a = stdout_json(&from_file);
    let b = stdout_json(&from_builtin);
    // The group field echoes the source; everything else is identical.
    assert_eq!(a["solutions"], b["solutions"]);
    assert_eq!(a["equation"], b["equation"]);
}

#[test]
fn exit_codes_cover_the_contract() {
    // 64: unusable arguments.
    assert_eq!(run(&["solve", "--group", "builtin:z2"]).status.code(), Some(64));
    assert_eq!(
        run(&["solve", "--group", "builtin:w9", "--equation", "long"])
            .status
            .code(),
        Some(64)
    );
    assert_eq!(
        run(&[
            "solve", "--group", "builtin:z2", "--equation", "dalembert", "--starts", "0",
            "--oracle"
        ])
        .status
        .code(),
        Some(64)
    );
    // 66: missing input file.
    assert_eq!(
        run(&["irreps", "--group", "/nonexistent/group.json"])
            .status
            .code(),
        Some(66)
    );
    // 2: file parsed but fails group validation (associativity).
    let bad = temp_file(
        "bad-group.json",
        "{\"names\": [\"0\",\"1\",\"2\",\"3\",\"4\"],
          \"table\": [[0,1,2,3,4],[1,0,3,4,2],[2,4,0,1,3],[3,2,4,0,1],[4,3,1,2,0]]}",
    );
    let out = run(&["irreps", "--group", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("associativity"));
    // 0: help and version.
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn seed_precedence_flag_over_env_over_default() {
    let out = Command::new(env!("CARGO_BIN_EXE_cocycle"))
        .args(["irreps", "--group", "builtin:z3", "--seed", "1"])
        .env("COCYCLE_SEED", "not-a-number")
        .output()
        .unwrap();
    // The flag wins, so the broken env var is never consulted.
    assert!(out.status.success());
    let out = Command::new(env!("CARGO_BIN_EXE_cocycle"))
        .args(["irreps", "--group", "builtin:z3"])
        .env("COCYCLE_SEED", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn output_flag_writes_the_same_bytes_as_stdout() {
    let path = std::env::temp_dir().join(format!("cocycle-out-{}.json", std::process::id()));
    let to_file = run(&[
        "solve",
        "--group",
        "builtin:z4",
        "--equation",
        "dalembert",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    let to_stdout = run(&["solve", "--group", "builtin:z4", "--equation", "dalembert"]);
    assert_eq!(std::fs::read(&path).unwrap(), to_stdout.stdout);
    let _ = std::fs::remove_file(&path);
}
