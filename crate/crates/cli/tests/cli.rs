use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn symvec(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symvec"))
        .args(args)
        .current_dir(dir)
        .env_remove("SYMVEC_BUDGET")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

#[test]
fn domination_of_w3() {
    let dir = tempfile::tempdir().unwrap();
    let out = symvec(dir.path(), &["domination", "--k", "3"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["strength"], "1/3");
    assert_eq!(v["star_value"], "1/3");
    assert_eq!(v["count_proper_nontrivial"], 16);
}

#[test]
fn domination_of_w2_is_degenerate() {
    let dir = tempfile::tempdir().unwrap();
    let out = symvec(dir.path(), &["domination", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));
}

#[test]
fn domination_from_files() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "chain2.poset", "poset 2\nrel 1 2\n");
    write(dir.path(), "a.measure", "measure chain2.poset\n1=1\n");
    write(dir.path(), "b.measure", "measure chain2.poset; 2=1\n");
    let out = symvec(
        dir.path(),
        &[
            "domination",
            "--poset",
            "chain2.poset",
            "--mu0",
            "a.measure",
            "--mu1",
            "b.measure",
        ],
    );
    assert!(out.status.success());
    assert_eq!(json(&out)["strength"], "1");
}

#[test]
fn bad_measure_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "chain2.poset", "poset 2\nrel 1 2\n");
    write(dir.path(), "a.measure", "measure chain2.poset\n1=1/2\n");
    write(dir.path(), "b.measure", "measure chain2.poset\n2=1\n");
    let out = symvec(
        dir.path(),
        &[
            "domination",
            "--poset",
            "chain2.poset",
            "--mu0",
            "a.measure",
            "--mu1",
            "b.measure",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn upsets_of_w3() {
    let dir = tempfile::tempdir().unwrap();
    let out = symvec(dir.path(), &["upsets", "--k", "3"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["count"], 18);
}

#[test]
fn budget_exhaustion_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = symvec(dir.path(), &["--budget", "100", "upsets", "--k", "5"]);
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_symvec"))
        .args(["upsets", "--k", "5"])
        .current_dir(dir.path())
        .env("SYMVEC_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        symvec(dir.path(), &["domination", "--k"]).status.code(),
        Some(1)
    );
    assert_eq!(
        symvec(dir.path(), &["no-such-command"]).status.code(),
        Some(1)
    );
}

#[test]
fn fano_construct_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let out = symvec(
        dir.path(),
        &[
            "construct",
            "--type",
            "fano",
            "--k",
            "3",
            "--symbol",
            "1",
            "--out",
            "fano.fam",
        ],
    );
    assert!(out.status.success());
    assert_eq!(json(&out)["size"], 435);
    assert!(dir.path().join("fano.fam.manifest.json").exists());

    let out = symvec(
        dir.path(),
        &[
            "check",
            "--family",
            "fano.fam",
            "--intersecting",
            "--symmetric",
            "2 3 4 5 6 7 1",
        ],
    );
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["intersecting"], true);
    assert_eq!(v["invariant"], true);
    assert_eq!(v["transitive"], true);
}

#[test]
fn failed_check_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    symvec(
        dir.path(),
        &[
            "construct",
            "--type",
            "dictator",
            "--n",
            "3",
            "--out",
            "d.fam",
        ],
    );
    let out = symvec(
        dir.path(),
        &[
            "check",
            "--family",
            "d.fam",
            "--intersecting",
            "--symmetric",
            "2 3 1",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["intersecting"], true);
    assert_eq!(v["invariant"], false);
    assert_eq!(v["passed"], false);
}

#[test]
fn half_measure_of_a_closed_dictator() {
    let dir = tempfile::tempdir().unwrap();
    symvec(
        dir.path(),
        &[
            "construct",
            "--type",
            "dictator",
            "--n",
            "2",
            "--closure",
            "--out",
            "d.fam",
        ],
    );
    let out = symvec(
        dir.path(),
        &["check", "--family", "d.fam", "--up-set", "--half-measure"],
    );
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["space"], "cover");
    assert_eq!(v["half_measure"], "1/2");
}

#[test]
fn search_majority() {
    let dir = tempfile::tempdir().unwrap();
    let out = symvec(
        dir.path(),
        &[
            "search",
            "--k",
            "2",
            "--n",
            "3",
            "--group",
            "cyclic",
            "--witness",
            "w.fam",
        ],
    );
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["max_size"], 4);
    assert_eq!(v["density"], "1/2");
    assert_eq!(v["witness_file"], "w.fam");
    assert!(v["wall_time_ms"].is_u64());
    let w = std::fs::read_to_string(dir.path().join("w.fam")).unwrap();
    assert!(w.starts_with("family k=2 n=3 space=base"));
    assert_eq!(w.lines().count(), 5);
}

#[test]
fn search_matches_brute_force() {
    let dir = tempfile::tempdir().unwrap();
    let fast = json(&symvec(dir.path(), &["search", "--k", "3", "--n", "3"]));
    let slow = json(&symvec(
        dir.path(),
        &["search", "--k", "3", "--n", "3", "--brute-force"],
    ));
    assert_eq!(fast["max_size"], 7);
    assert_eq!(fast["max_size"], slow["max_size"]);
    assert_eq!(fast["orbit_indices"], slow["orbit_indices"]);
}

#[test]
fn measure_of_empty_family() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "empty.fam", "family k=3 n=2 space=cover\n");
    let out = symvec(
        dir.path(),
        &["measure", "--family", "empty.fam", "--t", "0.5"],
    );
    assert!(out.status.success());
    assert_eq!(json(&out)["measure"], "0");
}

#[test]
fn monte_carlo_needs_a_seed_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    symvec(
        dir.path(),
        &[
            "construct",
            "--type",
            "dictator",
            "--n",
            "2",
            "--closure",
            "--out",
            "d.fam",
        ],
    );
    let out = symvec(
        dir.path(),
        &["measure", "--family", "d.fam", "--monte-carlo", "100"],
    );
    assert_eq!(out.status.code(), Some(1));
    let args = [
        "measure",
        "--family",
        "d.fam",
        "--t",
        "1/2",
        "--monte-carlo",
        "2000",
        "--seed",
        "11",
    ];
    let a = symvec(dir.path(), &args);
    let b = symvec(dir.path(), &args);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    let est = v["estimate"].as_f64().unwrap();
    assert!((est - 0.5).abs() < 5.0 * v["standard_error"].as_f64().unwrap());
}

#[test]
fn russo_check_on_dictator() {
    let dir = tempfile::tempdir().unwrap();
    symvec(
        dir.path(),
        &[
            "construct",
            "--type",
            "dictator",
            "--n",
            "3",
            "--closure",
            "--out",
            "d.fam",
        ],
    );
    for t in ["0", "0.3", "1/2", "1"] {
        let out = symvec(dir.path(), &["russo-check", "--family", "d.fam", "--t", t]);
        assert!(out.status.success(), "t = {t}");
        let v = json(&out);
        assert_eq!(v["derivative"], "1/3");
        assert_eq!(v["lower_bound"], "1/3");
        assert_eq!(v["passed"], true);
    }
}

#[test]
fn russo_check_on_full_cube() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("family k=3 n=1 space=cover\n");
    for m in ["1", "2", "3", "1,2", "1,3", "2,3"] {
        text.push_str(m);
        text.push('\n');
    }
    write(dir.path(), "full.fam", &text);
    let out = symvec(
        dir.path(),
        &["russo-check", "--family", "full.fam", "--t", "0.3"],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["derivative"], "0");
    assert_eq!(v["total_influence"], "0");
}

#[test]
fn russo_check_rejects_non_up_sets() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "single.fam", "family k=3 n=1 space=cover\n1\n");
    let out = symvec(
        dir.path(),
        &["russo-check", "--family", "single.fam", "--t", "0.3"],
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bound_chain_on_fano() {
    let dir = tempfile::tempdir().unwrap();
    symvec(
        dir.path(),
        &["construct", "--type", "fano", "--out", "fano.fam"],
    );
    let out = symvec(
        dir.path(),
        &[
            "--report",
            "chain.json",
            "bound-chain",
            "--family",
            "fano.fam",
        ],
    );
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("chain.json")).unwrap())
            .unwrap();
    // 435/2187 in lowest terms
    assert_eq!(v["bound"]["eps"], "145/729");
    assert_eq!(v["bound"]["kappa"], "1/3");
    assert_eq!(v["half_measure"]["at_most_half"], true);
    let c = v["bound"]["empirical_C"].as_f64().unwrap();
    assert!((c - 0.352).abs() < 1e-3);
    let manifest: Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("chain.json.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["command"], "bound-chain");
    let stderr = String::from_utf8_lossy(&out.stderr);
    for stage in ["closure", "half measure", "bound"] {
        assert!(stderr.contains(stage), "missing stage {stage}");
    }
}

#[test]
fn bound_chain_rejects_dictator() {
    let dir = tempfile::tempdir().unwrap();
    symvec(
        dir.path(),
        &[
            "construct",
            "--type",
            "dictator",
            "--n",
            "3",
            "--out",
            "d.fam",
        ],
    );
    let out = symvec(dir.path(), &["bound-chain", "--family", "d.fam"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not invariant"));
}

#[test]
fn bound_chain_in_one_dimension_warns() {
    let dir = tempfile::tempdir().unwrap();
    symvec(
        dir.path(),
        &[
            "construct",
            "--type",
            "dictator",
            "--n",
            "1",
            "--out",
            "d.fam",
        ],
    );
    let out = symvec(dir.path(), &["bound-chain", "--family", "d.fam"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["bound"]["eps"], "1/3");
    assert!(v["bound"]["empirical_C"].is_null());
    assert_eq!(v["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    symvec(
        dir.path(),
        &[
            "construct",
            "--type",
            "singer",
            "--q",
            "2",
            "--out",
            "s.fam",
        ],
    );
    let a = symvec(
        dir.path(),
        &["influence", "--family", "s.fam", "--t", "1/3"],
    );
    let b = symvec(
        dir.path(),
        &["influence", "--family", "s.fam", "--t", "1/3"],
    );
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
