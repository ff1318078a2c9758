//! End-to-end tests of the `revmc` binary against the shipped fixtures.

use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

fn revmc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_revmc"))
        .args(args)
        .env_remove("REVMC_SEED")
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn counts_reproduces_the_published_tables() {
    let out = stdout_of(&revmc(&["counts", &data("hla_synthetic.seq")]));
    assert!(out.contains("n: 3370"));
    assert!(out.contains("start: t"));
    assert!(out.contains("end: a"));
    assert!(out.contains("count.a: 621"));
    assert!(out.contains("count.c: 974"));
    assert!(out.contains("count.g: 1064"));
    assert!(out.contains("count.t: 711"));
    // Table rows: directed then undirected
    assert!(out.contains("a\t91\t160\t261\t108"));
    assert!(out.contains("t\t66\t239\t254\t152"));
    assert!(out.contains("a\t182\t373\t512\t174"));
    assert!(out.contains("t\t174\t488\t455\t304"));
}

#[test]
fn test_command_reproduces_worked_examples_from_table() {
    let out = stdout_of(&revmc(&[
        "test",
        &data("hla_counts.tsv"),
        "--models",
        "iid-uniform,iid,rev,markov",
        "--start",
        "t",
        "--end",
        "a",
    ]));
    assert!(out.contains("logml.iid-uniform: 1.142429015"));
    assert!(out.contains("logml.iid: 1.140417804"));
    assert!(out.contains("logml.rev: 2.166939224"));
    assert!(out.contains("logml.markov: 4.163820637"));
    assert!(out.contains("bf.iid-uniform_vs_iid: 1.00176e-30"));
    assert!(out.contains("bf.iid_vs_rev: 5.26280e-39"));
    assert!(out.contains("bf.rev_vs_markov: 5.20421e-6"));
    assert!(out.contains("bf.iid_vs_markov: 2.73887e-44"));
    assert!(out.contains("diag.ratio.ac: 160/213"));
    assert!(out.contains("diag.ratio.at: 108/66"));
    assert!(out.contains("diag.diff.at: 42"));
}

#[test]
fn test_command_accepts_sequence_input() {
    let out = stdout_of(&revmc(&[
        "test",
        &data("hla_synthetic.seq"),
        "--models",
        "iid,rev",
    ]));
    assert!(out.contains("bf.iid_vs_rev: 5.26280e-39"));
}

#[test]
fn reversible_model_needs_endpoints_with_a_table() {
    let out = revmc(&["test", &data("hla_counts.tsv"), "--models", "rev"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--start"));
}

#[test]
fn unknown_model_is_an_input_error() {
    let out = revmc(&["test", &data("hla_counts.tsv"), "--models", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_file_is_an_input_error() {
    let out = revmc(&["counts", "no/such/file.seq"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let dir = std::env::temp_dir();
    let out1 = dir.join("revmc_cli_test_dump1.txt");
    let out2 = dir.join("revmc_cli_test_dump2.txt");
    let out3 = dir.join("revmc_cli_test_dump3.txt");
    for (path, seed) in [(&out1, "42"), (&out2, "42"), (&out3, "43")] {
        let run = revmc(&[
            "simulate",
            "--graph",
            &data("graphs/k4_loops.toml"),
            "--weights",
            &data("weights/k4_loops_unit.toml"),
            "--steps",
            "200",
            "--walkers",
            "8",
            "--seed",
            seed,
            "--out",
            path.to_str().unwrap(),
        ]);
        let report = stdout_of(&run);
        assert!(report.contains(&format!("seed: {seed}")));
        assert!(report.contains("v0: t"));
    }
    let d1 = std::fs::read(&out1).unwrap();
    let d2 = std::fs::read(&out2).unwrap();
    let d3 = std::fs::read(&out3).unwrap();
    assert_eq!(d1, d2, "same seed must give identical dumps");
    assert_ne!(d1, d3, "different seeds must differ");
    let text = String::from_utf8(d1).unwrap();
    assert!(text.starts_with("# revmc"));
    assert!(text.contains("# columns: a-a a-c a-g a-t c-c c-g c-t g-g g-t t-t"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 8);
    for p in [&out1, &out2, &out3] {
        let _ = std::fs::remove_file(p);
    }
}

#[test]
fn seed_comes_from_env_unless_overridden() {
    let with_env = Command::new(env!("CARGO_BIN_EXE_revmc"))
        .args(["counts", &data("hla_synthetic.seq")])
        .env("REVMC_SEED", "7")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&with_env.stdout).contains("seed: 7"));
    let overridden = Command::new(env!("CARGO_BIN_EXE_revmc"))
        .args(["counts", &data("hla_synthetic.seq"), "--seed", "9"])
        .env("REVMC_SEED", "7")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&overridden.stdout).contains("seed: 9"));
}

#[test]
fn density_evaluates_and_flags_boundary_points() {
    let out = stdout_of(&revmc(&[
        "density",
        "--graph",
        &data("graphs/triangle.toml"),
        "--at",
        &data("points/triangle_uniform.toml"),
        "--v0",
        "1",
    ]));
    // 243 / (192 sqrt(3)) at the barycenter
    assert!(out.contains("density.value: 7.307"), "got: {out}");

    let boundary = std::env::temp_dir().join("revmc_cli_test_boundary.toml");
    std::fs::write(
        &boundary,
        "\"1-2\" = 1e-305\n\"1-3\" = 0.5\n\"2-3\" = 0.5\n",
    )
    .unwrap();
    let out = revmc(&[
        "density",
        "--graph",
        &data("graphs/triangle.toml"),
        "--at",
        boundary.to_str().unwrap(),
        "--v0",
        "1",
    ]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "boundary is a numerical-domain error"
    );
    let _ = std::fs::remove_file(&boundary);
}

#[test]
fn posterior_writes_a_reloadable_params_file() {
    let out_path = std::env::temp_dir().join("revmc_cli_test_posterior.toml");
    let report = stdout_of(&revmc(&[
        "posterior",
        &data("hla_synthetic.seq"),
        "--prior",
        "uniform:1",
        "--out",
        out_path.to_str().unwrap(),
    ]));
    assert!(report.contains("posterior.v0: a"));
    assert!(report.contains("posterior.a.a-c: 374"));
    assert!(report.contains("posterior.a.a-a: 183"));
    let written = std::fs::read_to_string(&out_path).unwrap();
    assert!(written.contains("v0 = \"a\""));
    assert!(written.contains("a-c = 374.0"));
    let _ = std::fs::remove_file(&out_path);
}
