use serde_json::Value;
use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_triqubit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_triqubit"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

const BELL_PAIR_UNNORMALIZED: &str = r#"{"amplitudes": [[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[1,0]]}"#;

#[test]
fn measures_ghz() {
    let o = run(&["measures", "ghz"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("slocc class: GHZ"));
    assert!(
        s.lines()
            .any(|l| l.trim_start().starts_with("s_a") && l.ends_with("0.693147")),
        "{s}"
    );
}

#[test]
fn measures_vartheta_json() {
    let o = run(&["--json", "measures", "vartheta"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    for (k, want) in [("tau_ab", 0.09), ("tau_ac", 0.09), ("tau_bc", 0.01), ("tau_abc", 0.81)] {
        assert!((v[k].as_f64().unwrap() - want).abs() < 1e-12, "{k}");
    }
    assert_eq!(v["slocc_class"], "GHZ");
    assert!(v["j1"].is_number());
}

#[test]
fn json_keys_follow_sweep_columns() {
    let v = json(&run(&["--json", "measures", "w"]));
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys[0], "seed");
    assert_eq!(keys[1], "kind");
    assert_eq!(keys[2], "lambda0");
}

#[test]
fn measures_with_oracle() {
    let o = run(&["--oracle", "--json", "measures", "kappa"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!(v["oracle_max_diff"].as_f64().unwrap() <= 1e-9);
    assert!(v["oracle_s_a"].is_number());
    let human = stdout(&run(&["--oracle", "measures", "G"]));
    assert!(human.contains("max closed-form/oracle discrepancy"));
}

#[test]
fn unnormalized_input_needs_flag() {
    let o = run_stdin(&["measures", "-"], BELL_PAIR_UNNORMALIZED);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("amplitudes"));
    let o = run_stdin(&["--normalize", "--json", "measures", "-"], BELL_PAIR_UNNORMALIZED);
    assert_eq!(o.status.code(), Some(0));
    assert!((json(&o)["tau_abc"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn malformed_input_names_the_field() {
    let o = run_stdin(&["measures", "-"], r#"{"asd": {"lambda": [1, 0, "zero", 0, 0]}}"#);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("asd.lambda[2]"), "{}", stderr(&o));
    let o = run_stdin(&["measures", "-"], "not json");
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["measures", "no-such-preset-or-file"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn fraction_strings_in_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    std::fs::write(
        &path,
        r#"{"asd": {"lambda": ["1/sqrt(3)", 0, "1/sqrt(3)", "1/sqrt(3)", 0], "phi": "0"}}"#,
    )
    .unwrap();
    let v = json(&run(&["--json", "measures", path.to_str().unwrap()]));
    assert!((v["tau_bc"].as_f64().unwrap() - 4.0 / 9.0).abs() < 1e-15);
    assert_eq!(v["slocc_class"], "W");
}

#[test]
fn table5_rows() {
    let o = run(&["--json", "table5"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!(v["max_tangle_deviation"].as_f64().unwrap() <= 1e-12);
    let rows = v["rows"].as_array().unwrap();
    let names: Vec<&str> = rows.iter().map(|r| r["state"].as_str().unwrap()).collect();
    assert_eq!(names, ["GHZ", "W", "G", "kappa", "vartheta"]);
    let g = rows[2]["cells"]["s_a"]["computed"].as_f64().unwrap();
    assert_eq!(format!("{g:.3}"), "0.562");
    let k = rows[3]["cells"]["s_a"]["computed"].as_f64().unwrap();
    assert!((k - 0.687).abs() < 1e-3);
    let human = stdout(&run(&["table5"]));
    assert!(human.contains("0.562335"));
}

#[test]
fn sweep_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = run(&["sweep", "-n", "10", "--seed", "42", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let c = stdout(&run(&["sweep", "-n", "10", "--seed", "43"]));
    assert_ne!(std::fs::read_to_string(&a).unwrap(), c);
}

#[test]
fn sweep_row_prefix_is_stable() {
    // row i uses its own stream, so longer sweeps extend shorter ones
    let short = stdout(&run(&["sweep", "-n", "3", "--seed", "5"]));
    let long = stdout(&run(&["sweep", "-n", "6", "--seed", "5"]));
    assert!(long.starts_with(&short));
}

fn read_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|x| x.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn sweep_schema_and_row_checks() {
    let (header, haar) = read_csv(&stdout(&run(&["sweep", "-n", "50", "--seed", "1"])));
    let (_, asd) = read_csv(&stdout(&run(&["sweep", "-n", "50", "--seed", "1", "--kind", "asd"])));
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    assert_eq!(header.len(), 2 + 6 + 16 + 11 + 4);
    assert_eq!(header.last().unwrap(), "slocc_class");
    let ln2_half = std::f64::consts::LN_2 - 0.5;
    for (rows, kind) in [(&haar, "haar"), (&asd, "asd")] {
        assert_eq!(rows.len(), 50);
        for row in rows {
            assert_eq!(row[col("kind")], kind);
            assert_eq!(row[col("seed")], "1");
            let j_empty = row[col("j1")].is_empty();
            assert_eq!(j_empty, kind == "haar");
            assert_eq!(row[col("lambda0")].is_empty(), kind == "haar");
            let f = |n: &str| row[col(n)].parse::<f64>().unwrap();
            let r = f("residual");
            assert!(r >= -ln2_half - 1e-9 && r <= 1e-9);
            // 17 significant digits in every float cell
            let cell = &row[col("tau_ab")];
            assert_eq!(
                cell.split('e').next().unwrap().trim_start_matches('-').len(),
                18,
                "{cell}"
            );
        }
    }
}

#[test]
fn sweep_errors() {
    assert_eq!(run(&["sweep", "-n", "0"]).status.code(), Some(1));
    let o = run(&["sweep", "-n", "1", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_monogamy_passes() {
    let o = run(&["verify", "monogamy", "-n", "1000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("[CKW inequality]"));
}

#[test]
fn verify_propositions_lists_anchors() {
    let o = run(&["verify", "propositions", "-n", "300"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for anchor in ["[Prop 1]", "[Prop 2]", "[Prop 3]", "[Sec III.C]"] {
        assert!(s.contains(anchor), "{anchor}");
    }
}

#[test]
fn verify_extrema_reports_w_argmax_and_fails_on_false_claims() {
    let o = run(&["--json", "verify", "extrema"]);
    assert_eq!(o.status.code(), Some(3));
    let v = json(&o);
    let stats = &v[0]["stats"];
    let t = 1.0 / 3f64.sqrt();
    for k in ["w_class_lambda0", "w_class_lambda2", "w_class_lambda3"] {
        assert!((stats[k].as_f64().unwrap() - t).abs() < 1e-6, "{k}");
    }
    assert!((stats["w_class_max_m"].as_f64().unwrap() - 0.63651).abs() < 1e-5);
    assert!(stderr(&o).contains("counterexample: asd lambda"));
}

#[test]
fn verify_ckw_reports_every_case() {
    let o = run(&["verify", "ckw", "-n", "200"]);
    assert_eq!(o.status.code(), Some(3));
    let s = stdout(&o);
    for (case, bound) in [
        (1, "0"),
        (2, "1.00000"),
        (5, "1.33333"),
        (6, "0.500000"),
        (8, "1.00000"),
    ] {
        assert!(
            s.lines()
                .any(|l| l.trim_start().starts_with(&format!("{case} ")) && l.contains(bound)),
            "case {case}"
        );
    }
    assert!(stderr(&o).contains("case 6"));
}

#[test]
fn verify_is_reproducible() {
    let a = stdout(&run(&["verify", "averages", "-n", "200", "--seed", "9"]));
    let b = stdout(&run(&["verify", "averages", "-n", "200", "--seed", "9"]));
    assert_eq!(a, b);
}

#[test]
fn classify_examples() {
    let line = |p: &str| stdout(&run(&["classify", p])).lines().next().unwrap().to_string();
    assert_eq!(line("ghz"), "GHZ; all pairwise tangles vanish; Property (5)");
    assert_eq!(line("w"), "W");
    assert_eq!(line("kappa"), "GHZ; none vanish; Property (6); form varpi1");
    let v = json(&run(&["--json", "classify", "vartheta"]));
    assert_eq!(v["slocc_class"], "GHZ");
}

#[test]
fn classify_rejects_amplitudes() {
    let o = run_stdin(&["--normalize", "classify", "-"], BELL_PAIR_UNNORMALIZED);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Schmidt"));
}

#[test]
fn reconstruct_examples() {
    let o = run(&["reconstruct", "4/9", "4/9", "1/4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("matches preset kappa"));
    let v = json(&run(&["--json", "reconstruct", "4/9", "4/9", "4/9"]));
    assert_eq!(v["w_class"], true);
    assert_eq!(v["lambda"][4].as_f64(), Some(0.0));
    let o = run(&["reconstruct", "0.6", "0.6", "0.6"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("infeasible"));
    assert_eq!(run(&["reconstruct", "x", "1", "1"]).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "nope"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
