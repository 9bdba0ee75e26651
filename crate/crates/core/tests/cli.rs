use std::path::Path;
use std::process::Command;

use schilling_core::cli::{
    run, EXIT_FAILED, EXIT_INPUT, EXIT_OK, EXIT_STEP, EXIT_USAGE, SWEEP_HEADER,
};
use schilling_core::prover::{Certificate, Rule};
use schilling_core::spectral::GridFunction;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn cli(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("schilling").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn certify_and_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.json");
    let r = cli(&["certify", "--q", "2/5", "--out", p(&cert)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.contains("regime: CASE_II"));
    assert!(r.out.contains("verdict: TRIVIAL_ONLY"));
    assert!(r.out.contains("steps: "));
    let r = cli(&["verify", p(&cert)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.out);
}

#[test]
fn certificates_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    assert_eq!(
        cli(&["certify", "--q", "11/25", "--out", p(&a)]).code,
        EXIT_OK
    );
    assert_eq!(
        cli(&["certify", "--q", "22/50", "--out", p(&b)]).code,
        EXIT_OK
    );
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn tampered_certificate_names_the_step() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    assert_eq!(
        cli(&["certify", "--q", "2/5", "--out", p(&path)]).code,
        EXIT_OK
    );
    let text = std::fs::read_to_string(&path).unwrap();
    let forward = Certificate::from_json(&text)
        .unwrap()
        .steps
        .iter()
        .position(|s| s.rule == Rule::Forward)
        .unwrap();
    // Widen the first forward band [4/15, 8/15] on the right.
    assert!(text.contains("\"8/15\""));
    std::fs::write(&path, text.replacen("\"8/15\"", "\"9/15\"", 1)).unwrap();
    let r = cli(&["verify", p(&path)]);
    assert_eq!(r.code, EXIT_FAILED);
    assert!(r.out.contains(&format!("step {forward}")), "{}", r.out);
}

#[test]
fn unreadable_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(cli(&["verify", p(&empty)]).code, EXIT_INPUT);
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{\"q\": ").unwrap();
    assert_eq!(cli(&["verify", p(&junk)]).code, EXIT_INPUT);
    assert_eq!(
        cli(&["verify", p(&dir.path().join("missing.json"))]).code,
        EXIT_INPUT
    );
}

#[test]
fn regime_errors() {
    let r = cli(&["certify", "--q", "9/20"]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.out.contains("ABOVE_THRESHOLD"));
    let r = cli(&["certify", "--q", "5/4"]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.out.contains("INVALID"));
    assert_eq!(cli(&["certify", "--q", "0"]).code, EXIT_USAGE);
    assert_eq!(cli(&["certify", "--q", "abc"]).code, EXIT_USAGE);
    assert_eq!(
        cli(&["certify", "--q", "1/3", "--seed-eps", "0"]).code,
        EXIT_USAGE
    );
}

#[test]
fn override_stops_at_the_cubic() {
    let r = cli(&["certify", "--q", "9/20", "--override-regime"]);
    assert_eq!(r.code, EXIT_STEP);
    assert!(
        r.err.contains("step failure at step") && r.err.contains("INEQ12"),
        "{}",
        r.err
    );
}

#[test]
fn seed_flags() {
    assert_eq!(
        cli(&[
            "certify",
            "--q",
            "1/3",
            "--seed-n",
            "inf",
            "--seed-eps",
            "-1"
        ])
        .code,
        EXIT_OK
    );
    assert_eq!(
        cli(&["certify", "--q", "2/5", "--seed-n", "3", "--seed-eps=-1"]).code,
        EXIT_OK
    );
    assert_eq!(
        cli(&["certify", "--q", "2/5", "--seed-n", "x"]).code,
        EXIT_USAGE
    );
}

#[test]
fn saturate_command() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let r = cli(&["saturate", "--q", "2/5", "--out", p(&path)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.contains("status: GOAL"));
    assert_eq!(cli(&["verify", p(&path)]).code, EXIT_OK);
    let r = cli(&["saturate", "--q", "49/100", "--passes", "1"]);
    assert_eq!(r.code, EXIT_FAILED);
    assert!(r.out.contains("status: BUDGET"));
    assert_eq!(cli(&["saturate", "--q", "3/4"]).code, EXIT_USAGE);
}

fn sweep_rows(text: &str) -> Vec<Vec<String>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        SWEEP_HEADER
    );
    rdr.records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn sweep_covered_range() {
    let r = cli(&[
        "sweep", "--qmin", "1/10", "--qmax", "44/100", "--steps", "12",
    ]);
    assert_eq!(r.code, EXIT_OK);
    let rows = sweep_rows(&r.out);
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|row| row[2] == "TRIVIAL_ONLY"), "{rows:?}");
    assert_eq!(rows[0][0], "1/10");
    assert_eq!(rows[11][0], "11/25");
}

#[test]
fn sweep_above_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let r = cli(&[
        "sweep",
        "--qmin",
        "45/100",
        "--qmax",
        "49/100",
        "--steps",
        "5",
        "--out",
        p(&path),
    ]);
    assert_eq!(r.code, EXIT_OK);
    let rows = sweep_rows(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(rows.len(), 5);
    for row in rows {
        assert_eq!(
            (row[1].as_str(), row[2].as_str(), row[3].as_str()),
            ("ABOVE_THRESHOLD", "REGIME_ERROR", "ABOVE_THRESHOLD")
        );
    }
}

#[test]
fn sweep_edge_cases() {
    let r = cli(&["sweep", "--qmin", "1/5", "--qmax", "2/5", "--steps", "1"]);
    let rows = sweep_rows(&r.out);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], "1/5");
    assert_eq!(
        cli(&["sweep", "--qmin", "2/5", "--qmax", "1/5"]).code,
        EXIT_USAGE
    );
    assert_eq!(
        cli(&["sweep", "--qmin", "0", "--qmax", "1/5"]).code,
        EXIT_USAGE
    );
    assert_eq!(
        cli(&["sweep", "--qmin", "1/5", "--qmax", "1"]).code,
        EXIT_USAGE
    );
    assert_eq!(
        cli(&["sweep", "--qmin", "1/5", "--qmax", "2/5", "--steps", "0"]).code,
        EXIT_USAGE
    );
}

#[test]
fn spectral_sweep_is_deterministic() {
    let args = [
        "sweep",
        "--qmin",
        "1/5",
        "--qmax",
        "2/5",
        "--steps",
        "3",
        "--mode",
        "spectral",
        "--grid",
        "64",
        "--iters",
        "20",
        "--rand-seed",
        "4",
    ];
    let strip = |text: &str| {
        sweep_rows(text)
            .into_iter()
            .map(|mut r| {
                r.pop();
                r
            })
            .collect::<Vec<_>>()
    };
    let (a, b) = (cli(&args), cli(&args));
    assert_eq!(a.code, EXIT_OK);
    let rows = strip(&a.out);
    assert_eq!(rows, strip(&b.out));
    assert!(rows.iter().all(|r| r[3].starts_with("lambda=")));
}

#[test]
fn spectral_command_writes_grid_function() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.csv");
    let r = cli(&[
        "spectral",
        "--q",
        "3/10",
        "--grid",
        "65",
        "--iters",
        "30",
        "--out",
        p(&path),
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.contains("lambda ="));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("x,value\n"));
    let f = GridFunction::read_csv(text.as_bytes()).unwrap();
    assert_eq!(f.grid().len(), 65);
    assert!((f.sup_norm() - 1.0).abs() < 1e-12);
    assert_eq!(
        cli(&["spectral", "--q", "1", "--grid", "65"]).code,
        EXIT_USAGE
    );
    assert_eq!(
        cli(&["spectral", "--q", "1/3", "--grid", "2"]).code,
        EXIT_USAGE
    );
}

#[test]
fn constants_are_labelled() {
    let r = cli(&["constants"]);
    assert_eq!(r.code, EXIT_OK);
    for needle in [
        "0.3819660",
        "0.4142135",
        "0.4424933",
        "q^2 - 3q + 1",
        "q^2 + 2q - 1",
        "3q^3 - 3q^2 + 3q - 1",
    ] {
        assert!(r.out.contains(needle), "missing {needle}");
    }
    assert_eq!(r.out.matches("approximation").count(), 3);
}

#[test]
fn help_lists_sweep_columns() {
    let r = cli(&["sweep", "--help"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("millis"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_schilling");
    let code = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .output()
            .unwrap()
            .status
            .code()
            .unwrap()
    };
    assert_eq!(code(&["certify", "--q", "1/4"]), EXIT_OK);
    assert_eq!(code(&["certify", "--q", "46/100"]), EXIT_USAGE);
    assert_eq!(
        code(&["certify", "--q", "46/100", "--override-regime"]),
        EXIT_STEP
    );
}
