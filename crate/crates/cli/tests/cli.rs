use std::path::Path;
use std::process::{Command, Output};

use whap_core::operator::{battery, Signal};
use whap_core::GridSpec;

fn whap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_whap")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stderr)))
}

const SMALL: [&str; 4] = ["--grid-T", "50", "--grid-N", "2048"];

fn write_signal(dir: &Path, name: &str, s: &Signal) -> String {
    let path = dir.join(name);
    let mut buf = Vec::new();
    s.write_csv(&mut buf).unwrap();
    std::fs::write(&path, buf).unwrap();
    path.to_str().unwrap().to_string()
}

fn read_signal(path: &str) -> Signal {
    let grid = GridSpec::new(50.0, 2048).unwrap();
    Signal::read_csv(grid, std::fs::File::open(path).unwrap()).unwrap()
}

#[test]
fn classify_trichotomy() {
    for (symbol, index, verdict) in [
        ("e(0)", 0.0, "Invertible"),
        ("e(3)", 3.0, "LeftInvertibleProperlyLeftFredholm"),
        ("e(-1.5)*exp(0.2*e(-1))", -1.5, "RightInvertibleProperlyRightFredholm"),
    ] {
        let o = whap(&["classify", "--symbol", symbol]);
        assert_eq!(code(&o), 0, "{symbol}");
        let v = json(&o);
        assert_eq!(v["index"], index);
        assert_eq!(v["verdict"], verdict);
        assert!((v["mean_motion_crosscheck"].as_f64().unwrap() - index).abs() <= 0.05);
    }
}

#[test]
fn exit_codes() {
    let o = whap(&["classify", "--symbol", "2 + + x"]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("at byte 4"), "{err}");
    assert!(err.contains("\n      ^"), "{err}");
    // zeros on the real line
    assert_eq!(code(&whap(&["factorize", "--symbol", "2*cos(x)"])), 3);
    assert_eq!(code(&whap(&["factorize", "--symbol", "1+2*e(-1)+2*e(1.3)"])), 3);
    assert_eq!(code(&whap(&["factorize", "--symbol", "x"])), 3);
    // positive spectrum on the left and a non-even right factor
    assert_eq!(
        code(&whap(&[
            "verify-op",
            "--check",
            "eq6",
            "--symbol",
            "e(1)",
            "--symbol",
            "e(2)"
        ])),
        5
    );
    assert_eq!(
        code(&whap(&["verify-op", "--check", "thm52-left", "--symbol", "e(-2)"])),
        5
    );
}

#[test]
fn factorize_then_classify_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    let path = path.to_str().unwrap();
    let symbol = "e(1.5)*exp(0.3*e(-1)+0.2*e(2))";
    assert_eq!(code(&whap(&["factorize", "--symbol", symbol, "--out", path])), 0);
    let record: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(record["kind"], "asymmetric");
    assert_eq!(record["index"], 1.5);
    let o = whap(&["classify", "--factorization", path, "--symbol", symbol]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["verdict"], "LeftInvertibleProperlyLeftFredholm");
    // a factorization of a different symbol is rejected
    let o = whap(&["classify", "--factorization", path, "--symbol", "e(1.5)"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn invert_identity_and_modes() {
    let dir = tempfile::tempdir().unwrap();
    let grid = GridSpec::new(50.0, 2048).unwrap();
    let g = &battery(&grid, 42)[3];
    let signal = write_signal(dir.path(), "g.csv", g);

    let trivial = dir.path().join("one.json");
    let trivial = trivial.to_str().unwrap();
    assert_eq!(code(&whap(&["factorize", "--symbol", "e(0)", "--out", trivial])), 0);
    let out = dir.path().join("out.csv");
    let out = out.to_str().unwrap();
    let o = whap(
        &[
            &SMALL[..],
            &["invert", "--factorization", trivial, "--signal", &signal, "--out", out],
        ]
        .concat(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(read_signal(out).max_abs_diff(g) <= 1e-12);

    let f = dir.path().join("f.json");
    let f = f.to_str().unwrap();
    assert_eq!(
        code(&whap(&["factorize", "--symbol", "e(-2)*exp(0.3*e(-1))", "--out", f])),
        0
    );
    let mut results = Vec::new();
    for ell in ["zero", "even"] {
        let out = dir.path().join(format!("{ell}.csv"));
        let out = out.to_str().unwrap();
        let args = [
            &SMALL[..],
            &[
                "invert",
                "--factorization",
                f,
                "--signal",
                &signal,
                "--ell",
                ell,
                "--out",
                out,
            ],
        ]
        .concat();
        assert_eq!(code(&whap(&args)), 0);
        results.push(read_signal(out));
    }
    assert!(results[0].max_abs_diff(&results[1]) <= 1e-8 * g.norm());
}

#[test]
fn invert_rejects_uncertified_factorization() {
    let dir = tempfile::tempdir().unwrap();
    let grid = GridSpec::new(50.0, 2048).unwrap();
    let signal = write_signal(dir.path(), "g.csv", &battery(&grid, 42)[0]);
    // the even factor vanishes at ξ = 0
    let record = r#"{"kind":"asymmetric","index":0.0,"minus":[{"freq":0.0,"re":1.0,"im":0.0}],
        "even":{"pointwise":"x^2/(1+x^2)"}}"#;
    let f = dir.path().join("f.json");
    std::fs::write(&f, record).unwrap();
    let o = whap(
        &[
            &SMALL[..],
            &["invert", "--factorization", f.to_str().unwrap(), "--signal", &signal],
        ]
        .concat(),
    );
    // the certificate refuses it while loading
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn invert_fails_when_grid_cannot_hold_the_shift() {
    let dir = tempfile::tempdir().unwrap();
    let grid = GridSpec::new(50.0, 2048).unwrap();
    let signal = write_signal(dir.path(), "g.csv", &battery(&grid, 42)[0]);
    let f = dir.path().join("f.json");
    let f = f.to_str().unwrap();
    assert_eq!(code(&whap(&["factorize", "--symbol", "e(20)", "--out", f])), 0);
    let o = whap(&[&SMALL[..], &["invert", "--factorization", f, "--signal", &signal]].concat());
    assert_eq!(code(&o), 4, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn trace_writes_header_and_rows() {
    let o = whap(&[
        "trace", "--symbol", "e(1)", "--from", "-1", "--to", "1", "--points", "5",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,re,im");
    assert_eq!(lines.len(), 6);
    let row: Vec<f64> = lines[3].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(row, vec![0.0, 1.0, 0.0]);
    // undefined samples are kept as NaN rows
    let o = whap(&["trace", "--symbol", "1/x", "--from", "-1", "--to", "1", "--points", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().nth(2).unwrap().ends_with("NaN,NaN"));
}

#[test]
fn verify_op_report_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "grid_t = 100.0\ngrid_n = 8192\nthreshold = 1e-6\n").unwrap();
    let o = whap(&[
        "--config",
        cfg.to_str().unwrap(),
        "verify-op",
        "--check",
        "prop31",
        "--symbol",
        "exp(0.2*e(-1))",
        "--symbol",
        "1+0.3*e(1.2)",
        "--symbol",
        "2+cos(2*x)",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["check"], "Prop31");
    assert_eq!(v["grid"]["half_length"], 100.0);
    assert_eq!(v["threshold"], 1e-6);
    assert_eq!(v["passed"], true);
    assert_eq!(v["per_signal"].as_array().unwrap().len(), 16);
    assert_eq!(v["symbols"].as_array().unwrap().len(), 3);
    // a threshold below the attainable residual fails with exit 1
    let o = whap(&[
        "verify-op",
        "--threshold",
        "1e-30",
        "--check",
        "eqseg",
        "--symbol",
        "e(1)+e(-0.5)",
        "--symbol",
        "2+e(0.7)",
    ]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["passed"], false);
}

#[test]
fn outputs_are_deterministic() {
    let args = [
        "verify-op",
        "--seed",
        "5",
        "--check",
        "hankel-vanishing",
        "--symbol",
        "exp(e(-pi))",
    ];
    assert_eq!(whap(&args).stdout, whap(&args).stdout);
    let args = ["factorize", "--symbol", "exp(0.3*e(-1)+0.2*e(2))"];
    let (a, b) = (whap(&args), whap(&args));
    assert_eq!(a.stdout, b.stdout);
}
