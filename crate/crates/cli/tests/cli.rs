use std::process::{Command, Output};

fn twobridge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twobridge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn invariants_json() {
    let o = twobridge(&["invariants", "--conway", "4,-2,2,-4", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["det"], 33);
    assert_eq!(v["a2"], 8);
    assert_eq!(v["a4"], 4);
    assert_eq!(v["four_v3"], 22);
    assert_eq!(v["genus"], 2);
    assert_eq!(v["signature"], 4);
}

#[test]
fn invariants_agree_across_routes() {
    let base = twobridge(&["invariants", "--conway", "C[6,-2,4,-4]", "--json"]);
    let alt = twobridge(&[
        "--det",
        "jones",
        "--a2",
        "expansion",
        "--four-v3",
        "jones",
        "--bracket",
        "state-sum",
        "--signature",
        "eigen-f64",
        "invariants",
        "--conway",
        "C[6,-2,4,-4]",
        "--json",
    ]);
    assert_eq!(alt.status.code(), Some(0), "{}", String::from_utf8_lossy(&alt.stderr));
    let (a, b): (serde_json::Value, serde_json::Value) = (
        serde_json::from_slice(&base.stdout).unwrap(),
        serde_json::from_slice(&alt.stdout).unwrap(),
    );
    assert_eq!(a, b);
}

#[test]
fn obstruct_trefoil_and_named_case() {
    let o = twobridge(&["obstruct", "--conway", "2,-2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "excluded_torus_2k");

    let o = twobridge(&["obstruct", "--conway", "4,-2,2,-4", "--density-p-max", "15"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "no_ccs_equality");
    assert_eq!(v["slope_lmo"], "100/11");
    assert_eq!(v["density_window"]["p_range"], serde_json::json!([11, 15]));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(twobridge(&["invariants", "--conway", "3,-2"]).status.code(), Some(2));
    assert_eq!(
        twobridge(&["--signature", "exact", "invariants", "--conway", "2,-2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(twobridge(&["frobnicate"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("out.txt");
    let o = twobridge(&["enumerate", "--max-complexity", "4", "--out", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn enumerate_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let csv = dir.path().join("r.csv");
    for (path, serial) in [(&json, false), (&csv, true)] {
        let mut args = vec![
            "enumerate",
            "--max-complexity",
            "8",
            "--dedup",
            "symmetry",
            "--out",
            path.to_str().unwrap(),
        ];
        if serial {
            args.push("--serial");
        }
        let o = twobridge(&args);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("inconclusive: 0"));
    }
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let n = report["reports"].as_array().unwrap().len();
    let counted: u64 = report["counts"]
        .as_object()
        .unwrap()
        .values()
        .map(|v| v.as_u64().unwrap())
        .sum();
    assert_eq!(counted as usize, n);
    assert!(report.get("wall_time").is_none());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "key,g,det,a2,a4,four_v3,slope_lmo,slope_hf,main_ineq,equality_violated,verdict"
    );
    assert_eq!(text.lines().count(), n + 1);
}

#[test]
fn main_only_chain_fails_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = twobridge(&[
        "--obstructions",
        "main",
        "enumerate",
        "--max-complexity",
        "6",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("inconclusive"));
}

#[test]
fn replay_and_oracle_subcommands_pass() {
    let o = twobridge(&["verify-paper"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
    let o = twobridge(&["oracle-check", "--max-complexity", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS torus signature gate"));
}

#[test]
fn config_file_selects_strategies_and_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "[strategies]\nfour_v3 = \"jones\"\n[grid]\ngenus3_max = 3\n").unwrap();
    let o = twobridge(&["--config", cfg.to_str().unwrap(), "verify-paper"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("C[2x,-2,4,-2,2,-2v] main (9 checked)"));

    std::fs::write(&cfg, "[strategies]\nshape = \"round\"\n").unwrap();
    assert_eq!(
        twobridge(&["--config", cfg.to_str().unwrap(), "verify-paper"])
            .status
            .code(),
        Some(2)
    );
}
