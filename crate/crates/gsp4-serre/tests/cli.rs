use std::path::PathBuf;
use std::process::{Command, Output};

use gsp4_serre::cli::{parse_job, run, Report, TaskOutcome};
use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gsp4-serre"))
}

fn job_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gsp4-serre-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run_bin(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

const BOREL: &str = r#"
prime = 7
type = "borel"

[params]
x = 4
y = 2
delta = 0

[flags]
tau0 = "peu"
b_x = "peu"
"#;

const KLINGEN: &str = r#"{
  "prime": 7,
  "type": "klingen",
  "params": {"x": 6, "y": 5, "w": 2},
  "tasks": ["weight", "generic", "fl-check"]
}"#;

#[test]
fn borel_classical_from_binary() {
    let path = job_file("borel.toml", BOREL);
    let out = run_bin(&[
        "--input",
        path.to_str().unwrap(),
        "--task",
        "classify,classical",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = stdout_json(&out);
    assert_eq!(v["schema"], "gsp4-serre/report/1");
    assert_eq!(v["tasks"]["classify"]["summary"], "borel");
    let c = &v["tasks"]["classical"]["result"];
    assert_eq!(
        (c["k1"].clone(), c["k2"].clone(), c["w"].clone()),
        (json!(5), json!(4), json!(0))
    );
    assert!(c["witness"]["witness"]["ledger"].is_array());
}

#[test]
fn klingen_example_sits_on_a_wall() {
    let path = job_file("klingen.json", KLINGEN);
    let out = run_bin(&["--input", path.to_str().unwrap()]);
    let v = stdout_json(&out);
    assert_eq!(
        v["tasks"]["weight"]["result"]["lambda"],
        json!({"a": 4, "b": 0, "c": 2})
    );
    assert_eq!(v["tasks"]["weight"]["result"]["shifted_alcove"], "Boundary");
    assert_eq!(v["tasks"]["generic"]["result"]["generic"], false);
    assert_eq!(v["tasks"]["fl-check"]["status"], "error");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    let even = job_file("even.toml", &BOREL.replace("prime = 7", "prime = 8"));
    let out = run_bin(&["--input", even.to_str().unwrap(), "--task", "classify"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd prime"));

    let broken = job_file("broken.toml", "prime = 7\ntype = \"borel\"\n[params\n");
    let out = run_bin(&["--input", broken.to_str().unwrap(), "--task", "classify"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));

    let missing = run_bin(&["--input", "/nonexistent/job.toml", "--task", "classify"]);
    assert_eq!(missing.status.code(), Some(2));

    let path = job_file("narrow.toml", BOREL);
    let out = run_bin(&[
        "--input",
        path.to_str().unwrap(),
        "--task",
        "classical",
        "--window",
        "a=1..3",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(
        stdout_json(&out)["tasks"]["classical"]["kind"],
        "window_exhausted"
    );

    let tres = job_file(
        "tres.toml",
        &BOREL.replace("tau0 = \"peu\"", "tau0 = \"tres\""),
    );
    let out = run_bin(&["--input", tres.to_str().unwrap(), "--task", "classify"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tres flag requires ratio eps"));
}

#[test]
fn prime_flag_must_agree() {
    let path = job_file("agree.toml", BOREL);
    let out = run_bin(&[
        "--input",
        path.to_str().unwrap(),
        "--task",
        "classify",
        "--prime",
        "11",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn text_format() {
    let path = job_file("text.toml", BOREL);
    let out = run_bin(&[
        "--input",
        path.to_str().unwrap(),
        "--task",
        "classical",
        "--format",
        "text",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("p = 7, borel x=4 y=2 delta=0\n"), "{text}");
    assert!(text.contains("classical: (5, 4, 0)"), "{text}");
}

#[test]
fn output_is_byte_identical_across_runs() {
    let path = job_file("det.toml", BOREL);
    let args = [
        "--input",
        path.to_str().unwrap(),
        "--task",
        "classify,weight,lift,classical,pdcris",
    ];
    let a = run_bin(&args).stdout;
    let b = run_bin(&args).stdout;
    assert_eq!(a, b);
    let e = ["--enumerate", "siegel", "--prime", "5"];
    let one = run_bin(&[&e[..], &["--jobs", "1"]].concat()).stdout;
    let four = run_bin(&[&e[..], &["--jobs", "4"]].concat()).stdout;
    assert_eq!(one, four);
}

#[test]
fn report_round_trips() {
    let job = parse_job(
        BOREL,
        false,
        None,
        &["lift".into(), "pdcris".into(), "classical".into()],
        None,
    )
    .unwrap();
    let report = run(&job);
    let text = report.to_json();
    let back: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
    assert_eq!(back.to_json(), text);
    assert!(matches!(report.tasks["lift"], TaskOutcome::Ok { .. }));
}

#[test]
fn enumerate_borel_p5_has_classical_weights() {
    let out = run_bin(&[
        "--enumerate",
        "borel",
        "--prime",
        "5",
        "--task",
        "classical",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["schema"], "gsp4-serre/enumeration/1");
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 64);
    assert_eq!(v["summary"]["total"], 64);
    for r in reports {
        assert_eq!(
            r["tasks"]["classical"]["status"], "ok",
            "{}",
            r["representation"]
        );
    }
}

#[test]
fn enumerate_klingen_p5_generic_c1_obstructed() {
    let out = run_bin(&["--enumerate", "klingen", "--prime", "5"]);
    let v = stdout_json(&out);
    let mut c0 = 0;
    for r in v["reports"].as_array().unwrap() {
        let t = &r["tasks"];
        let alcove = &t["weight"]["result"]["shifted_alcove"];
        if t["generic"]["result"]["generic"] == true && alcove == "C1" {
            assert_eq!(t["fl-check"]["result"]["obstructed"], true);
        }
        if alcove == "C0" {
            assert_eq!(t["fl-check"]["status"], "error");
            c0 += 1;
        }
    }
    assert!(c0 > 0);
}

#[test]
fn enumerate_p3_is_fast() {
    let start = std::time::Instant::now();
    for t in ["borel", "siegel", "klingen", "endoscopic", "irreducible"] {
        let out = run_bin(&["--enumerate", t, "--prime", "3"]);
        assert!(matches!(out.status.code(), Some(0 | 1)), "{t}");
    }
    assert!(start.elapsed() < std::time::Duration::from_secs(5));
}

#[test]
fn enumerate_cost_guard() {
    let out = run_bin(&["--enumerate", "borel", "--prime", "13"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--force"));
}
