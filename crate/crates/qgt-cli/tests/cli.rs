//! End-to-end checks of the `qgt` binary: run, compare, spectrum, validate.

use std::path::Path;
use std::process::{Command, Output};

fn qgt() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qgt"))
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn short_config(dir: &Path, name: &str, seed: u64, nl: &str) -> std::path::PathBuf {
    let path = dir.join(format!("{name}.toml"));
    std::fs::write(
        &path,
        format!(
            r#"
name = "{name}"
seed = {seed}
iterations = 400
stride = 10

[cost]
kind = "academic"
nodes = 16

[graph]
kind = "exponential"
nodes = 16

[nonlinearity]
{nl}
"#
        ),
    )
    .unwrap();
    path
}

#[test]
fn run_writes_csv_and_svg_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = short_config(dir.path(), "cli_run", 5, "kind = \"log\"\nrho = 0.0078125");
    let out_dir = dir.path().join("out");

    let out = qgt()
        .args(["run"])
        .arg(&cfg)
        .arg("--out-dir")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("final_gap"));
    assert!(text.contains("alpha_bar"));

    let csv_path = out_dir.join("cli_run.csv");
    let svg_path = out_dir.join("cli_run.svg");
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.contains("# Fstar="));
    assert!(csv.contains("k,gap,consensus_err,tracking_residual,alpha,epoch"));
    assert!(std::fs::read_to_string(&svg_path).unwrap().starts_with("<svg"));

    let first = std::fs::read(&csv_path).unwrap();
    let out = qgt()
        .args(["run"])
        .arg(&cfg)
        .arg("--out-dir")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(first, std::fs::read(&csv_path).unwrap(), "rerun must be byte-identical");
}

#[test]
fn bundled_configs_validate_and_the_academic_ones_run() {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for entry in std::fs::read_dir(&configs).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("toml") {
            continue;
        }
        let out = qgt().args(["validate"]).arg(&path).output().unwrap();
        assert!(
            out.status.success(),
            "{} failed validation: {}",
            path.display(),
            stderr(&out)
        );
    }

    // The switching-network figure pair reproduces end to end; the final gap
    // must sit well under the initial one and the structured network must
    // come out ahead.
    let dir = tempfile::tempdir().unwrap();
    let mut finals = Vec::new();
    for name in ["fig3_exponential_logq", "fig3_er_logq"] {
        let out = qgt()
            .args(["run"])
            .arg(configs.join(format!("{name}.toml")))
            .arg("--out-dir")
            .arg(dir.path())
            .output()
            .unwrap();
        assert!(out.status.success(), "{name}: {}", stderr(&out));
        let csv = std::fs::read_to_string(dir.path().join(format!("{name}.csv"))).unwrap();
        let rows: Vec<&str> = csv
            .lines()
            .filter(|l| !l.starts_with('#') && !l.starts_with('k'))
            .collect();
        let gap_of = |line: &str| -> f64 { line.split(',').nth(1).unwrap().parse().unwrap() };
        let initial = gap_of(rows.first().unwrap());
        let last = gap_of(rows.last().unwrap());
        assert!(
            last <= initial * 1e-3,
            "{name}: gap {initial} -> {last} decayed too little"
        );
        finals.push(last);
    }
    assert!(
        finals[0] <= finals[1],
        "exponential final gap {} should not exceed the ER one {}",
        finals[0],
        finals[1]
    );
}

#[test]
fn bundled_quantization_pair_orders_log_below_uniform() {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let dir = tempfile::tempdir().unwrap();
    let mut finals = Vec::new();
    for name in ["fig4_exp_log_rho16", "fig4_exp_uniform_rho16"] {
        let out = qgt()
            .args(["run"])
            .arg(configs.join(format!("{name}.toml")))
            .arg("--out-dir")
            .arg(dir.path())
            .output()
            .unwrap();
        assert!(out.status.success(), "{name}: {}", stderr(&out));
        let csv = std::fs::read_to_string(dir.path().join(format!("{name}.csv"))).unwrap();
        let last = csv
            .lines()
            .rfind(|l| !l.starts_with('#') && !l.starts_with('k'))
            .unwrap()
            .to_string();
        finals.push(last.split(',').nth(1).unwrap().parse::<f64>().unwrap());
    }
    assert!(
        finals[0] <= finals[1],
        "log final gap {} should not exceed the uniform one {}",
        finals[0],
        finals[1]
    );

    // The pair shares a stride grid, so the comparison report aligns.
    let svg = dir.path().join("fig4.svg");
    let out = qgt()
        .args(["compare"])
        .arg(dir.path().join("fig4_exp_log_rho16.csv"))
        .arg(dir.path().join("fig4_exp_uniform_rho16.csv"))
        .arg("--out")
        .arg(&svg)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("fig4_exp_log_rho16"));
    assert!(svg.exists());
}

#[test]
fn compare_reports_aligned_tables_and_rejects_arity_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let a = short_config(dir.path(), "cmp_log", 9, "kind = \"log\"\nrho = 0.0625");
    let b = short_config(dir.path(), "cmp_uniform", 9, "kind = \"uniform\"\nrho = 0.0625");
    for cfg in [&a, &b] {
        let out = qgt()
            .args(["run"])
            .arg(cfg)
            .arg("--out-dir")
            .arg(&out_dir)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let svg = dir.path().join("combined.svg");
    let out = qgt()
        .args(["compare"])
        .arg(out_dir.join("cmp_log.csv"))
        .arg(out_dir.join("cmp_uniform.csv"))
        .arg("--out")
        .arg(&svg)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let table = stdout(&out);
    assert!(table.contains("cmp_log"));
    assert!(table.contains("cmp_uniform"));
    assert!(table.contains("final_gap"));
    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(svg_text.matches("<polyline").count(), 2);

    // A single trace is an arity error at the parser level.
    let out = qgt()
        .args(["compare"])
        .arg(out_dir.join("cmp_log.csv"))
        .arg("--out")
        .arg(&svg)
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn spectrum_prints_connectivity_and_bound() {
    let dir = tempfile::tempdir().unwrap();
    let edgelist = dir.path().join("two.edges");
    // Two-node bidirectional graph, weight 0.5: lambda2 = 1.
    std::fs::write(&edgelist, "n 2 directed 0\n0 1 5e-1\n1 0 5e-1\n").unwrap();
    let out = qgt()
        .args(["spectrum"])
        .arg(&edgelist)
        .args(["--smoothness", "2.0", "--sector-upper", "1.0"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let value_of = |key: &str| -> f64 {
        text.lines()
            .find(|l| l.starts_with(key))
            .unwrap_or_else(|| panic!("missing `{key}` in: {text}"))
            .split('=')
            .nth(1)
            .unwrap()
            .trim()
            .parse()
            .unwrap()
    };
    assert!((value_of("lambda2_real_abs") - 1.0).abs() < 1e-9, "{text}");
    assert!((value_of("alpha_bar") - 0.5).abs() < 1e-9, "{text}");
}

#[test]
fn missing_and_invalid_inputs_exit_nonzero() {
    let out = qgt().args(["run", "/nonexistent/qgt.toml"]).output().unwrap();
    assert!(!out.status.success());
    assert!(stderr(&out).contains("cannot read config"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "name = \"x\"\n").unwrap();
    let out = qgt().args(["validate"]).arg(&bad).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn out_dir_env_var_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = short_config(dir.path(), "cli_env", 3, "kind = \"none\"");
    let env_out = dir.path().join("env_out");
    let out = qgt()
        .args(["run"])
        .arg(&cfg)
        .env("QGT_OUT_DIR", &env_out)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(env_out.join("cli_env.csv").exists());
}
