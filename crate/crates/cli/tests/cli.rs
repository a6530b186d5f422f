use std::path::Path;
use std::process::{Command, Output};

use schurdirac_cli::{parse_config, run, Command as Cmd};

const BIN: &str = env!("CARGO_BIN_EXE_schurdirac");

fn invoke(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn c2_report_has_expected_fields() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c2.cfg", "kappa=-1\nnu=0.5\ngrid.N=400\n");
    let out = invoke(&["c2", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let row = &doc["rows"][0];
    assert!((row["c2_analytic"].as_f64().unwrap() - 1.36602540378).abs() < 1e-11);
    assert!(row["diff"].as_f64().unwrap() < 5e-3);
    assert!(row["inertia_oracle"].is_number());
    assert_eq!(doc["metadata"]["command"], "c2");
    assert!(doc["metadata"].get("wall_time_s").is_none());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let strong = write(dir.path(), "strong.cfg", "nu=1.3\n");
    assert_eq!(invoke(&["spectrum", "--config", &strong]).status.code(), Some(2));
    assert_eq!(invoke(&["c2", "--config", &strong]).status.code(), Some(2));

    let bad = write(dir.path(), "bad.cfg", "nu=-0.1\n");
    let out = invoke(&["c2", "--config", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`nu`"));

    let missing = dir.path().join("none.cfg").display().to_string();
    assert_eq!(invoke(&["c2", "--config", &missing]).status.code(), Some(1));

    let mismatch = write(dir.path(), "mm.cfg", "command=solve\nnu=0.5\n");
    assert_eq!(invoke(&["c2", "--config", &mismatch]).status.code(), Some(1));
}

#[test]
fn validate_flags_supercritical_coupling() {
    let dir = tempfile::tempdir().unwrap();
    let ok = write(dir.path(), "ok.cfg", "nu=0.5\ngrid.N=300\n");
    assert_eq!(invoke(&["validate", "--config", &ok]).status.code(), Some(0));
    let over = write(dir.path(), "over.cfg", "nu=1.05\ngrid.N=300\n");
    let out = invoke(&["validate", "--config", &over]);
    assert_eq!(out.status.code(), Some(2));
    // the report is still written
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["summary"]["coupling_ok"], false);
}

#[test]
fn reports_are_written_atomically_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "sw.cfg", "sweep.nu=0.5,1.1\nsweep.N=100,200\nsweep.r_min=1e-4,1e-6\n");
    let target = dir.path().join("sweep.csv");
    let out = invoke(&["hardy-sweep", "--config", &cfg, "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let csv = std::fs::read_to_string(&target).unwrap();
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "nu,grid_N,grid_scheme,margin,c2_numeric,c2_analytic,e1_numeric,e1_analytic");
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 5);
    let leftovers: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .filter(|n| n.to_string_lossy().starts_with(".tmp"))
        .collect();
    assert!(leftovers.is_empty());
}

#[test]
fn config_echo_reparses_to_same_config() {
    for (cmd, text) in [
        (Cmd::C2, "nu=0.5\ngrid.N=64\ngrid.scheme=uniform\ngrid.r_min=0.01\n"),
        (Cmd::HardySweep, "sweep.nu=0.9,1.0,1.05\nsweep.N=40,80\ntol.eigen=1e-9\noutput.timing=true\n"),
        (Cmd::Solve, "kappa=2\nnu=0.25\nsolve.f1=one\nsolve.f2=exp\ngrid.N=50\n"),
    ] {
        let cfg = schurdirac_cli::parse_config_for(text, Some(cmd)).unwrap();
        let report = run(&cfg).unwrap().report;
        let csv = report.render(&schurdirac_cli::RunConfig {
            output_format: schurdirac_cli::OutputFormat::Csv,
            ..cfg.clone()
        }, None);
        let echo: String = csv
            .lines()
            .filter_map(|l| l.strip_prefix("# config "))
            .map(|l| format!("{l}\n"))
            .collect();
        let mut back = parse_config(&echo).unwrap();
        back.output_format = cfg.output_format;
        assert_eq!(back, cfg);

        let json = report.to_json(&cfg, None);
        let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
        let echo: String = doc["metadata"]["config"]
            .as_object()
            .unwrap()
            .iter()
            .map(|(k, v)| format!("{k}={}\n", v.as_str().unwrap()))
            .collect();
        assert_eq!(parse_config(&echo).unwrap(), cfg);
    }
}

#[test]
fn timing_only_when_requested() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "t.cfg", "nu=0.5\ngrid.N=100\noutput.timing=true\n");
    let out = invoke(&["spectrum", "--config", &cfg]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["metadata"]["wall_time_s"].is_number());
}
