use std::process::{Command, Output};

fn bwm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bwm-lab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn exit_code_matrix() {
    let cases: &[(&[&str], i32)] = &[
        (&["verify", "--case", "hermitian", "--q", "1.2", "--m", "-2"], 0),
        (&["verify", "--case", "unitary", "--q", "e^{i*pi/8}", "--m", "-2"], 0),
        (&["verify", "--case", "hermitian", "--q", "random", "--count", "10"], 0),
        (&["verify", "--case", "unitary", "--q", "random", "--count", "10"], 0),
        (&["verify", "--case", "hermitian", "--q", "1.0", "--m", "-2"], 2),
        (&["verify", "--case", "unitary", "--q", "1.2"], 2),
        (&["verify", "--case", "sideways", "--q", "1.2"], 2),
        (&["verify", "--case", "hermitian", "--q", "x"], 2),
        (&["--abs", "1e-300", "--rel", "1e-300", "verify", "--case", "hermitian", "--q", "1.7"], 1),
        (&["--abs", "-1", "verify", "--case", "hermitian", "--q", "1.7"], 2),
        (&["chain"], 0),
        (&["chain", "--phi", "pi", "--J", "1"], 0),
        (&["chain", "--J", "2"], 0),
        (&["chain", "--phi", "0"], 1),
        (&["scan", "--j", "1/2", "--m", "1/2"], 0),
        (&["scan", "--j", "1", "--m", "0"], 0),
        (&["scan", "--j", "3/2", "--m", "3/2"], 0),
        (&["scan", "--j", "3/x", "--m", "1/2"], 2),
        (&["scan", "--j", "1", "--m", "1/2"], 2),
        (&["scan", "--j", "1", "--m", "1", "--points", "99"], 2),
        (&["ybe", "--j", "1", "--theta", "2pi/3", "2pi/3", "2pi/3"], 0),
        (&["ybe", "--j", "1", "--x", "1", "--y", "1"], 0),
        (&["ybe", "--j", "1", "--theta", "pi/6", "pi/6", "pi/6"], 2),
        (&["ybe", "--j", "1", "--theta", "0", "pi/2", "pi/2"], 2),
        (&["ybe", "--j", "1", "--x", "1"], 2),
        (&["wigner", "--j", "1", "--theta", "pi/2", "--phi", "0"], 0),
        (&["wigner", "--j", "1", "--theta", "0", "--phi", "0.7"], 0),
        (&["wigner", "--j", "3/2", "--theta", "pi", "--phi", "0"], 0),
        (&["wigner", "--j", "-1", "--theta", "pi"], 2),
        (&["wigner", "--j", "1", "--theta", "half"], 2),
        (&["frobnicate"], 2),
        (&[], 2),
        (&["--help"], 0),
    ];
    for (args, want) in cases {
        let o = bwm(args);
        assert_eq!(o.status.code(), Some(*want), "{args:?}\nstdout:\n{}\nstderr:\n{}", stdout(&o), stderr(&o));
    }
}

#[test]
fn degenerate_q_names_w() {
    let o = bwm(&["verify", "--case", "hermitian", "--q", "1.0", "--m", "-2"]);
    assert!(stderr(&o).contains("W = lambda1 - 1/lambda1 vanishes"), "{}", stderr(&o));
}

#[test]
fn chain_reports() {
    let o = bwm(&["chain", "--J", "2"]);
    let text = stdout(&o);
    assert!(text.contains("singlet eigenvalues (J = 2)"));
    assert!(text.contains("expected [-12.0, -4.0, 0.0]: PASS"));
    assert!(text.contains("f1"));
    let o = bwm(&["chain", "--phi", "0"]);
    assert!(stdout(&o).contains("phi = 0.000000: FAIL"));

    let o = bwm(&["--format", "json", "chain"]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let eig: Vec<f64> = serde_json::from_value(doc["singlet"]["singlet_eigenvalues"].clone()).unwrap();
    for (a, b) in eig.iter().zip([-6.0, -2.0, 0.0]) {
        assert!((a - b).abs() < 1e-9);
    }
    assert_eq!(doc["basis_table"]["rows"].as_array().unwrap().len(), 83);
}

#[test]
fn scan_summaries() {
    let text = stdout(&bwm(&["scan", "--j", "1/2", "--m", "1/2"]));
    assert!(text.contains("theta = 1.570796 (pi/2): S max, f max"), "{text}");
    assert!(text.contains("theta = 3.141593 (pi): S min, f min"), "{text}");
    let text = stdout(&bwm(&["scan", "--j", "1", "--m", "0"]));
    assert!(text.contains("m=0: common-extremum guarantee does not apply"));
    let text = stdout(&bwm(&["scan", "--j", "3/2", "--m", "3/2"]));
    assert!(text.contains("theta = 1.570796 (pi/2): S max, f max"), "{text}");
}

#[test]
fn scan_csv_file_is_reproducible() {
    let dir = std::env::temp_dir().join(format!("bwm-lab-cli-{}", std::process::id()));
    let first = dir.join("a.csv");
    let second = dir.join("b");
    let args = |out: &str| vec!["--seed".to_string(), "3".into(), "scan".into(), "--j".into(), "3/2".into(), "--m".into(), "1/2".into(), "--out".into(), out.to_string()];
    let o = Command::new(env!("CARGO_BIN_EXE_bwm-lab")).args(args(first.to_str().unwrap())).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let o = Command::new(env!("CARGO_BIN_EXE_bwm-lab")).args(args(second.to_str().unwrap())).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let a = std::fs::read(&first).unwrap();
    let b = std::fs::read(second.join("scan_j3_2_m1_2.csv")).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().next(), Some("theta,entropy,l1,d_entropy,d_l1,bound_gap"));
    assert_eq!(text.lines().count(), 2002);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn csv_to_stdout_is_byte_identical() {
    let args = ["--format", "csv", "--seed", "11", "scan", "--j", "2", "--m", "1", "--points", "400"];
    let (a, b) = (bwm(&args), bwm(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn wigner_output() {
    let o = bwm(&["--format", "json", "wigner", "--j", "3/2", "--theta", "pi", "--phi", "0"]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let m = doc["matrix"].as_array().unwrap();
    // Antidiagonal with signs (-1)^(j + m').
    let signs = [-1.0, 1.0, -1.0, 1.0];
    for (i, row) in m.iter().enumerate() {
        for (k, z) in row.as_array().unwrap().iter().enumerate() {
            let re = z[0].as_f64().unwrap();
            let want = if i + k == 3 { signs[i] } else { 0.0 };
            assert!((re - want).abs() < 1e-12, "({i},{k}) {re}");
        }
    }
}

#[test]
fn ybe_json() {
    let o = bwm(&["--format", "json", "ybe", "--j", "1", "--x", "1", "--y", "1"]);
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for t in doc["thetas"].as_array().unwrap() {
        assert!((t.as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }
    assert!((doc["phi"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    assert!(doc["residual"].as_f64().unwrap() < 1e-10);
}
