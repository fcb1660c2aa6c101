use std::path::{Path, PathBuf};

use tempfile::TempDir;
use weakverify_cli::report::RunReport;
use weakverify_cli::{execute, run_cli, Args};

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn cli(config: &Path, extra: &[&str]) -> i32 {
    let mut argv = vec!["weakverify".to_string(), "--config".into(), config.display().to_string()];
    argv.extend(extra.iter().map(|s| s.to_string()));
    run_cli(argv)
}

const VERIFY: &str = r#"
experiment = "verify"
hypothesis = "P({H}) > 1/2"
alpha = 0.05
n_max = 120
trials = 400
seed = 11
worlds = [{ kind = "named", name = "fair-coin" }]
claims = [{ kind = "sv3-bound", alpha = 0.05 }]
"#;

#[test]
fn verify_passes_and_writes_exact_header() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "v.toml", VERIFY);
    let out = dir.path().join("v.csv");
    assert_eq!(cli(&cfg, &["--output", out.to_str().unwrap()]), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,accept_rate,ci_low,ci_high,cum_error"));
    assert_eq!(lines.count(), 120);
}

#[test]
fn failing_claim_exits_two() {
    let dir = TempDir::new().unwrap();
    let text = VERIFY
        .replace("name = \"fair-coin\"", "name = \"heads-biased\"")
        .replace("{ kind = \"sv3-bound\", alpha = 0.05 }", "{ kind = \"sv4-eventual\", target = 0.99 }");
    let cfg = write(dir.path(), "f.toml", &text);
    let out = dir.path().join("f.csv");
    assert_eq!(cli(&cfg, &["--output", out.to_str().unwrap()]), 2);
}

#[test]
fn bad_alpha_names_key_and_line() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "bad.toml", &VERIFY.replace("alpha = 0.05\n", "alpha = 1.5\n"));
    assert_eq!(cli(&cfg, &[]), 1);
    let args = Args { config: cfg, seed: None, output: None, format: None, trials: None };
    let msg = format!("{:#}", execute(&args).unwrap_err());
    assert!(msg.contains("alpha must lie in (0,1)"), "{msg}");
    assert!(msg.contains("`alpha` (line 4)"), "{msg}");
}

#[test]
fn unknown_key_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "u.toml", &format!("{VERIFY}\nbogus = 3\n"));
    let args = Args { config: cfg.clone(), seed: None, output: None, format: None, trials: None };
    let msg = format!("{:#}", execute(&args).unwrap_err());
    assert!(msg.contains("bogus"), "{msg}");
    assert_eq!(cli(&cfg, &[]), 1);
}

#[test]
fn missing_config_exits_one() {
    assert_eq!(cli(Path::new("/nonexistent/config.toml"), &[]), 1);
}

#[test]
fn json_report_round_trips() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "v.toml", VERIFY);
    let out = dir.path().join("r.json");
    let args = Args { config: cfg, seed: None, output: Some(out.clone()), format: None, trials: Some(50) };
    let report = execute(&args).unwrap();
    let back: RunReport = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(back, report);
}

#[test]
fn seeded_reruns_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "v.toml", VERIFY);
    let mut outputs = Vec::new();
    for (i, fmt) in ["csv", "json", "csv", "json"].iter().enumerate() {
        let out = dir.path().join(format!("run{i}.{fmt}"));
        let code = cli(&cfg, &["--seed", "99", "--trials", "100", "--format", fmt, "--output", out.to_str().unwrap()]);
        assert_eq!(code, 0);
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[2]);
    assert_eq!(outputs[1], outputs[3]);
}

#[test]
fn several_worlds_get_numbered_files() {
    let dir = TempDir::new().unwrap();
    let text = VERIFY.replace(
        "worlds = [{ kind = \"named\", name = \"fair-coin\" }]",
        "worlds = [{ kind = \"named\", name = \"fair-coin\" }, { kind = \"bernoulli\", p = \"2/5\" }]",
    );
    let cfg = write(dir.path(), "m.toml", &text);
    let out = dir.path().join("m.csv");
    assert_eq!(cli(&cfg, &["--trials", "50", "--output", out.to_str().unwrap()]), 0);
    assert!(dir.path().join("m-1.csv").exists());
    assert!(dir.path().join("m-2.csv").exists());
}

#[test]
fn prop_constantly_zero_on_alternating_world_settles_on_w() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "p.toml",
        r#"
experiment = "prop"
method = "limit"
hypothesis = "constantly-zero"
stages = 16
worlds = [{ kind = "sequence", bits = "010101…" }]
claims = [{ kind = "stabilizes", to = "W" }]
"#,
    );
    let out = dir.path().join("p.csv");
    assert_eq!(cli(&cfg, &["--output", out.to_str().unwrap()]), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "stage,prefix,conclusion");
    assert_eq!(rows[1], "0,,piece(1)");
    assert_eq!(rows[2], "1,0,piece(1)");
    assert!(rows[3..].iter().all(|r| r.ends_with(",W")), "{text}");
}

#[test]
fn solve_defaults_to_the_true_answer() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "s.toml",
        r#"
experiment = "solve"
partition = "three-cell-bias"
alpha = "1/20"
n_max = 300
trials = 40
worlds = [{ kind = "bernoulli", p = 0.8 }]
claims = [{ kind = "sv4-eventual", target = 0.9 }]
"#,
    );
    let out = dir.path().join("s.json");
    let args = Args { config: cfg, seed: Some(3), output: Some(out), format: None, trials: None };
    let report = execute(&args).unwrap();
    assert!(report.passed(), "{:?}", report.summary());
}

#[test]
fn weak_convergence_desk_check() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "w.toml",
        r#"
experiment = "weak-convergence"
worlds = [{ kind = "dyadic-coins", base = "1/2", count = 20 }]
limit = { kind = "named", name = "fair-coin" }
tol = 0.01
claims = [{ kind = "converges" }]
"#,
    );
    let out = dir.path().join("w.csv");
    assert_eq!(cli(&cfg, &["--output", out.to_str().unwrap()]), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("event,max_tail_deviation,within_tolerance\n"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn shipped_configs_run() {
    let dir = TempDir::new().unwrap();
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for entry in std::fs::read_dir(&configs).unwrap() {
        let cfg = entry.unwrap().path();
        let out = dir.path().join("out.json");
        let code = cli(&cfg, &["--trials", "100", "--output", out.to_str().unwrap()]);
        assert_eq!(code, 0, "{}", cfg.display());
    }
}
