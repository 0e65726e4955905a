use std::process::{Command, Output};
use std::time::{Duration, Instant};

use clap::Parser;
use lubin_tate::cli::{self, Cli, Output as CliOutput, Report, RunConfig, EXIT_CHECK_FAILED};
use lubin_tate::Check;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lubin-tate"))
        .args(args)
        .output()
        .unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn verify_all_passes_for_small_cases() {
    let out = bin(&["verify-all", "--q", "2", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["status"] == "pass"));
    // timing stays out of the report
    assert!(!String::from_utf8_lossy(&out.stdout).contains("elapsed"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("elapsed"));
}

#[test]
fn verify_all_time_limits() {
    for (q, n, seq, limit) in [
        ("2", "2", "2,1", 10),
        ("3", "2", "2,1", 120),
        ("2", "3", "3,2", 300),
    ] {
        let start = Instant::now();
        let out = bin(&["verify-all", "--q", q, "--n", n, "--sequence", seq]);
        assert_eq!(out.status.code(), Some(0), "({q},{n})");
        assert!(start.elapsed() < Duration::from_secs(limit));
        let v = json(&out);
        let names: Vec<&str> = v["checks"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["name"].as_str().unwrap())
            .collect();
        let order = [
            "formal axioms",
            "depth0 equation",
            "chart valuations",
            "exceptional equation",
            "dl invariants",
            "characters",
        ];
        let firsts: Vec<usize> = order
            .iter()
            .map(|s| {
                names
                    .iter()
                    .position(|n| n.starts_with(s))
                    .expect("suite present")
            })
            .collect();
        assert!(
            firsts.windows(2).all(|w| w[0] < w[1]),
            "suite order {firsts:?}"
        );
    }
}

#[test]
fn dl_count_reports_six() {
    let out = bin(&["dl", "count", "--q", "2", "--n", "2", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"]["count"], 6);
}

#[test]
fn csv_dump_of_points() {
    let out = bin(&[
        "dl", "count", "--q", "2", "--n", "2", "--m", "2", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("x1,x2"));
    assert_eq!(text.lines().count(), 7);
    // CSV is reserved for point dumps
    assert_eq!(
        bin(&["chars", "table", "--q", "2", "--n", "2", "--format", "csv"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn usage_and_parameter_errors_exit_two() {
    assert_eq!(
        bin(&["depth0", "chart", "--q", "9", "--n", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        bin(&["verify-all", "--q", "6", "--n", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(bin(&["verify-all", "--n", "2"]).status.code(), Some(2));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        bin(&["dl", "twisted", "--q", "2", "--n", "2", "--g", "1,1;1,1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn budget_exceeded_exits_three() {
    let out = bin(&[
        "dl", "count", "--q", "2", "--n", "3", "--m", "3", "--budget", "100",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let out = bin(&["verify-all", "--q", "2", "--n", "2", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(json(&out)["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["status"] == "fail"));
}

#[test]
fn failing_check_maps_to_exit_one() {
    let cli =
        Cli::try_parse_from(["lubin-tate", "chars", "table", "--q", "2", "--n", "2"]).unwrap();
    let cfg = RunConfig::resolve(&cli, &Default::default()).unwrap();
    let r = Report::new(
        "test",
        &cfg,
        serde_json::Value::Null,
        &[Check::new("x", false, "")],
    );
    assert_eq!(r.exit_code(), EXIT_CHECK_FAILED);
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "# defaults\nq = 3\nn = 2\nm = 1\n").unwrap();
    let p = path.to_str().unwrap();
    let v = json(&bin(&["dl", "count", "--config", p]));
    assert_eq!(v["config"]["q"], 3);
    assert_eq!(v["config"]["m"], 1);
    let v = json(&bin(&[
        "dl", "count", "--config", p, "--q", "2", "--m", "2",
    ]));
    assert_eq!(v["config"]["q"], 2);
    assert_eq!(v["results"]["count"], 6);
    std::fs::write(&path, "colour = blue\n").unwrap();
    assert_eq!(bin(&["dl", "count", "--config", p]).status.code(), Some(2));
}

#[test]
fn output_flag_and_library_entry_point() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chars.json");
    let code = cli::run([
        "lubin-tate",
        "chars",
        "correspondence",
        "--q",
        "3",
        "--n",
        "2",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(
        v["results"]["report"]["entries"].as_array().unwrap().len(),
        3
    );

    let parsed =
        Cli::try_parse_from(["lubin-tate", "depth0", "strata", "--q", "2", "--n", "3"]).unwrap();
    let (out, _) = cli::execute(&parsed).unwrap();
    let CliOutput::Report(r) = out else {
        panic!("expected a report")
    };
    assert!(r.passed());
}

#[test]
fn other_subcommands_run() {
    for args in [
        &[
            "formal-group",
            "--q",
            "2",
            "--n",
            "2",
            "--kind",
            "universal",
        ][..],
        &["depth0", "equation", "--q", "3", "--n", "2"],
        &[
            "depth0",
            "chart",
            "--q",
            "2",
            "--n",
            "3",
            "--sequence",
            "3,1",
        ],
        &[
            "depth0", "chart", "--q", "2", "--n", "2", "--lift", "symbolic",
        ],
        &["dl", "equation", "--q", "3", "--n", "2"],
        &["dl", "fibers", "--q", "2", "--n", "3", "--m", "3"],
        &[
            "dl", "twisted", "--q", "2", "--n", "2", "--zeta", "1", "--g", "0,1;1,0",
        ],
        &[
            "chars",
            "steinberg",
            "--q",
            "2",
            "--n",
            "3",
            "--threads",
            "2",
        ],
    ] {
        let out = bin(args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}
