use std::path::Path;
use std::process::{Command, Output};

fn copspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_copspec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn classify_json_golden_files() {
    let goldens = [
        ("x+1", "affine_shift.json", 0),
        ("2x", "affine_scale.json", 0),
        ("-x", "affine_flip.json", 0),
        ("x^2+1", "quadratic_no_fp.json", 0),
        ("x^2+x", "quadratic_critical.json", 0),
        ("x^2", "quadratic_origin.json", 0),
        ("x^2+1/4", "quadratic_tangent.json", 0),
        ("x+x^3", "cubic_triple_fp.json", 0),
        ("x^3", "cubic_plain.json", 0),
        ("-x^3-x", "cubic_neg_contracting.json", 0),
        ("-x^3", "cubic_neg_plain.json", 0),
        ("-x^3+x-1", "cubic_neg_partial.json", 2),
    ];
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for (symbol, file, expected_code) in goldens {
        let out = copspec(&["classify", symbol, "--json"]);
        assert_eq!(code(&out), expected_code, "{symbol}");
        let got: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
        let want: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.join(file)).expect("golden exists"))
                .expect("golden parses");
        assert_eq!(got, want, "{symbol} drifted from {file}");
    }
}

#[test]
fn classify_parse_error() {
    let out = copspec(&["classify", "x^^2"]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("syntax error at column 3"), "stderr: {err}");
}

#[test]
fn member_examples() {
    for (symbol, lambda, expected, exit) in [
        ("x^2+1/4", "1,0", "In", 0),
        ("x^2+1", "1,0", "Out", 0),
        ("x^2+1/4", "2,0", "Out", 0),
        ("x^2+1/4", "1/2,1/2", "In", 0),
        ("-x^3+x-1", "2,0", "Unknown", 2),
    ] {
        let out = copspec(&["member", symbol, "--lambda", lambda]);
        assert_eq!(code(&out), exit, "{symbol} {lambda}");
        assert_eq!(stdout(&out).trim(), expected, "{symbol} {lambda}");
    }
}

#[test]
fn resolvent_reports_residual() {
    let out = copspec(&["resolvent", "x^2+2", "--lambda", "1,0", "--g", "gaussian"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let line = text
        .lines()
        .find(|l| l.starts_with("max_residual:"))
        .expect("residual line");
    let v: f64 = line
        .trim_start_matches("max_residual:")
        .trim()
        .parse()
        .expect("numeric residual");
    assert!(v < 1e-9, "{line}");
}

#[test]
fn witness_table_doubles() {
    let out = copspec(&["witness", "x^2+1/4", "--lambda", "0.5,0", "--mmax", "5"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for (m, expect) in [(0usize, 2.0f64), (1, 4.0), (2, 8.0), (3, 16.0), (4, 32.0)] {
        let row = text
            .lines()
            .find(|l| l.starts_with(&format!("{m},")))
            .expect("row present");
        let abs: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!((abs - expect).abs() < 1e-9, "m={m}: {row}");
    }
}

#[test]
fn dynamics_squaring_line() {
    let out = copspec(&["dynamics", "x^2+1", "--K", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "N=2, a=2");
}

#[test]
fn plot_data_samples_circle() {
    let dir = std::env::temp_dir().join("copspec_plot_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("circle.csv");
    let out = copspec(&["classify", "x+1", "--plot-data", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let csv = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "re,im");
    assert_eq!(lines.len(), 257, "256 polar samples plus header");
    for l in &lines[1..] {
        let (re, im) = l.split_once(',').unwrap();
        let (re, im): (f64, f64) = (re.parse().unwrap(), im.parse().unwrap());
        assert!((re * re + im * im - 1.0).abs() < 1e-12);
    }
}
