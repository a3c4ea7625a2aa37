use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn melonlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_melonlab")).args(args).output().expect("binary runs")
}

fn melonlab_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_melonlab"))
        .args(args)
        .env("MELONLAB_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn depth_of_worked_word() {
    let o = melonlab(&["depth", "--dim", "3", "0;10132120312"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config: {"));
    assert_eq!(lines.next(), Some("word,tree_depth,depth,stack_depth"));
    assert_eq!(lines.next(), Some("0;10132120312,11,4,4"));
}

#[test]
fn depth_reads_word_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("words.txt");
    fs::write(&input, "# comment\n0;10132120312\n0;\n0;0\n").unwrap();
    let o = melonlab(&["depth", "--dim", "3", "--input", input.to_str().unwrap()]);
    assert!(o.status.success());
    let rows: Vec<String> = stdout(&o).lines().filter(|l| !l.starts_with('#')).map(String::from).collect();
    assert_eq!(rows[1..], ["0;10132120312,11,4,4", "0;,0,0,0", "0;0,1,2,2"]);
}

#[test]
fn lemma2_reports_exact_constant() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lemma2.csv");
    let o = melonlab(&["lemma2", "--dim", "2", "--n", "1000", "--reps", "4", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let summary = read_json(&out.with_extension("json"));
    assert_eq!(summary["result"]["lambda_delta"], "2/9");
    assert_eq!(summary["result"]["mean_block_length"], "9/2");
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("# config: {"));
    assert!(csv.lines().nth(1) == Some("n,mean_depth,stderr"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"dim": 3, "order": 6, "target": "H0"}"#).unwrap();
    let o = melonlab(&["series", "--config", cfg.to_str().unwrap(), "--dim", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let header = text.lines().next().unwrap().strip_prefix("# config: ").unwrap();
    let echoed: Value = serde_json::from_str(header).unwrap();
    assert_eq!(echoed["dim"], 2);
    assert_eq!(echoed["order"], 6);
    assert_eq!(echoed["target"], "H0");
    // (3N + 1) C_N at D = 2
    assert!(text.contains("\n1,4\n"));
    assert!(text.contains("\n2,14\n"));
}

#[test]
fn echoed_config_reproduces_run() {
    let first = melonlab(&["hausdorff", "--dim", "2", "--sizes", "64,128,256,512", "--reps", "8", "--seed", "4"]);
    assert!(first.status.success());
    let text = stdout(&first);
    let header = text.lines().next().unwrap().strip_prefix("# config: ").unwrap();
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, header).unwrap();
    let again = melonlab(&["hausdorff", "--config", cfg.to_str().unwrap()]);
    assert!(again.status.success());
    assert_eq!(stdout(&again), text);
}

#[test]
fn outputs_identical_across_thread_counts() {
    let runs = [
        vec!["hausdorff", "--dim", "2", "--sizes", "64,128,256,512", "--reps", "12", "--seed", "9"],
        vec!["spectral", "--dim", "3", "--n", "256", "--t-max", "128", "--graphs", "12", "--walkers", "20"],
        vec!["lemma2", "--dim", "3", "--n", "2000", "--reps", "10"],
    ];
    for args in runs {
        let one = melonlab_threads(&args, "1");
        let four = melonlab_threads(&args, "4");
        assert!(one.status.success() && four.status.success(), "{args:?}");
        assert_eq!(one.stdout, four.stdout, "{args:?}");
    }
}

#[test]
fn sample_then_walk_exact() {
    let dir = tempfile::tempdir().unwrap();
    let trees = dir.path().join("trees.txt");
    let o = melonlab(&["sample", "--dim", "2", "--size", "1", "--count", "3", "--out", trees.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&trees).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 3);
    // the open elementary melon returns to I at t = 2 with probability 1/(D+1)
    let o = melonlab(&["walk-exact", "--input", trees.to_str().unwrap(), "--t-max", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\n2,1/3,"));
}

#[test]
fn sampling_is_deterministic() {
    let args = ["sample", "--dim", "3", "--size", "50", "--count", "4", "--seed", "11"];
    assert_eq!(melonlab(&args).stdout, melonlab(&args).stdout);
    let simple = ["sample", "--dim", "3", "--size", "50", "--simple", "--seed", "11"];
    assert_eq!(melonlab(&simple).stdout, melonlab(&simple).stdout);
}

#[test]
fn spectral_summary_fields() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("walk.csv");
    let o = melonlab(&[
        "spectral",
        "--dim",
        "2",
        "--n",
        "512",
        "--t-max",
        "256",
        "--graphs",
        "20",
        "--walkers",
        "20",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = read_json(&out.with_extension("json"));
    for key in ["d_S", "err", "window", "n", "D", "ensemble"] {
        assert!(!s["result"][key].is_null(), "{key}");
    }
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().nth(1), Some("t,P,stderr"));
    assert_eq!(csv.lines().nth(2), Some("0,1,0"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(melonlab(&["bogus"]).status.code(), Some(1));
    assert_eq!(melonlab(&["spectral", "--t-max", "15", "--n", "64"]).status.code(), Some(1));
    assert_eq!(melonlab(&["series", "--target", "H7"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, "{ not json").unwrap();
    assert_eq!(melonlab(&["lemma2", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
    let unwritable = dir.path().join("missing").join("out.csv");
    let o = melonlab(&["series", "--order", "4", "--out", unwritable.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(melonlab_threads(&["lemma2"], "many").status.code(), Some(1));
    assert_eq!(melonlab(&["--help"]).status.code(), Some(0));
}

#[test]
fn quick_verification_passes() {
    let o = melonlab(&["verify", "--quick"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 8);
    assert!(!text.contains("FAIL"));
}
