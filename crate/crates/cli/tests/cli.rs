use std::path::PathBuf;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_chi2refine");

fn run_with_threads(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("CHI2REFINE_THREADS", t),
        None => cmd.env_remove("CHI2REFINE_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_with_threads(args, None)
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    std::fs::read_to_string(path).unwrap()
}

/// Parses CSV output into a header and rows of fields.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    (header, lines.map(|l| l.split(',').map(String::from).collect()).collect())
}

fn col(text: &str, name: &str) -> Vec<f64> {
    let (header, rows) = csv_rows(text);
    let j = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[j].parse().unwrap()).collect()
}

const GOLDEN: &[(&str, &[&str])] = &[
    ("survival_r4.csv", &["survival", "--r", "4", "--lambda", "0", "--a", "0:8:9", "--format", "csv"]),
    ("survival_r30_l2.json", &["survival", "--r", "30", "--lambda", "2", "--delta", "-3:3:7", "--format", "json"]),
    ("scan_loglog.csv", &["scan", "--r", "100:10000:3", "--lambda", "0", "--order", "0,1,2", "--format", "csv"]),
    ("constants.csv", &["constants", "--format", "csv"]),
    ("median.csv", &["median", "--r", "10:1000:3", "--lambda", "0:3:2", "--format", "csv"]),
    ("detect_leading.csv", &["detect", "--target", "0.01516183", "--order", "0,1,2", "--format", "csv"]),
    ("llt.csv", &["llt", "--r", "400", "--lambda", "1", "--delta", "-1.5:1.5:7", "--format", "csv"]),
    ("metrics.csv", &["metrics", "--r", "50:3200:4", "--lambda", "0:1:2", "--format", "csv"]),
    (
        "moments_mc.csv",
        &["moments", "--r", "5", "--lambda", "0:2:2", "--samples", "20000", "--seed", "11", "--format", "csv"],
    ),
    ("survival_table.txt", &["survival", "--r", "4", "--a", "2:6:3"]),
];

#[test]
fn outputs_match_golden_files_for_any_thread_count() {
    for (file, args) in GOLDEN {
        let expected = golden(file);
        for threads in [Some("1"), Some("3"), None] {
            let out = run_with_threads(args, threads);
            assert!(out.status.success(), "{file}");
            assert_eq!(String::from_utf8(out.stdout).unwrap(), expected, "{file} with threads {threads:?}");
        }
    }
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let out = run(&[
        "scan",
        "--r",
        "100:10000:3",
        "--lambda",
        "0",
        "--order",
        "0,1,2",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), golden("scan_loglog.csv"));
}

#[test]
fn csv_headers() {
    let cases: &[(&[&str], &str)] = &[
        (&["survival", "--r", "4", "--a", "1"], "a,delta,exact,approx_0,approx_1,approx_2,approx_3,abs_err_0,abs_err_1,abs_err_2,abs_err_3"),
        (&["scan", "--r", "50", "--order", "0"], "r,lambda,order,max_error,argmax_delta,scaled_error"),
        (&["constants", "--order", "0"], "order,lambda,m_constant,argmax_abs_y"),
        (&["median", "--r", "5"], "r,lambda,exact_median,asymptotic_median,residual,scaled_residual"),
        (&["detect", "--target", "0.1", "--order", "0"], "target,lambda,order,mode,r"),
        (
            &["llt", "--r", "50", "--delta", "0"],
            "r,lambda,x,delta,in_bulk,exact_log_ratio,log_expansion,log_residual,exact_ratio,ratio_expansion,ratio_residual",
        ),
        (
            &["metrics", "--r", "50"],
            "r,lambda,kolmogorov,total_variation,hellinger,scaled_kolmogorov,scaled_total_variation,scaled_hellinger_sq",
        ),
        (&["moments", "--r", "5"], "r,lambda,n,central_moment,mc_moment,mc_std_error,samples,seed"),
    ];
    for (args, header) in cases {
        let mut a = args.to_vec();
        a.extend(["--format", "csv"]);
        assert_eq!(stdout(&a).lines().next().unwrap(), *header, "{args:?}");
    }
}

#[test]
fn survival_matches_closed_forms() {
    let text = stdout(&["survival", "--r", "4", "--lambda", "0", "--a", "0:8:9", "--format", "csv"]);
    for (a, s) in col(&text, "a").into_iter().zip(col(&text, "exact")) {
        let erlang = (-a / 2.0).exp() * (1.0 + a / 2.0);
        assert!((s - erlang).abs() <= 1e-11, "a={a}: {s} vs {erlang}");
    }
    let text = stdout(&["survival", "--r", "2", "--lambda", "0", "--a", "0", "--format", "csv"]);
    assert_eq!(col(&text, "exact"), vec![1.0]);
}

#[test]
fn survival_order_three_close_at_r_250() {
    let text = stdout(&["survival", "--r", "250", "--lambda", "0", "--a", "250", "--format", "csv"]);
    assert!((col(&text, "exact")[0] - col(&text, "approx_3")[0]).abs() < 1e-4);
    assert!((col(&text, "abs_err_3")[0] - (col(&text, "exact")[0] - col(&text, "approx_3")[0]).abs()).abs() < 1e-11);
}

#[test]
fn scan_examples() {
    let text = stdout(&["scan", "--r", "100:10000:3:log", "--lambda", "0", "--order", "0", "--format", "csv"]);
    let scaled = col(&text, "scaled_error");
    let dev: Vec<f64> = scaled.iter().map(|s| (s - 0.188_063).abs()).collect();
    assert!(dev[2] < dev[1] && dev[1] < dev[0] && dev[2] < 1e-5, "{scaled:?}");
    assert_eq!(col(&text, "r"), vec![100.0, 1000.0, 10000.0]);

    let text = stdout(&["scan", "--r", "250", "--lambda", "0", "--order", "2", "--format", "csv"]);
    assert!(col(&text, "max_error")[0] < 0.015_161_83);
}

#[test]
fn constants_detect_median_examples() {
    let text = stdout(&["constants", "--order", "0", "--format", "csv"]);
    assert!((col(&text, "m_constant")[0] - 0.188_063).abs() <= 1e-6);

    let text = stdout(&["detect", "--target", "0.01516183", "--order", "2", "--mode", "leading", "--format", "csv"]);
    assert_eq!(col(&text, "r"), vec![8.0]);

    let text = stdout(&["median", "--r", "2", "--lambda", "0", "--format", "csv"]);
    assert!((col(&text, "exact_median")[0] - 1.386_294).abs() < 1e-6);
    assert!((col(&text, "asymptotic_median")[0] - 1.333_333).abs() < 1e-6);
}

#[test]
fn moments_without_sampling_leave_columns_empty() {
    let text = stdout(&["moments", "--r", "2", "--lambda", "1", "--n", "4", "--format", "csv"]);
    assert_eq!(text.lines().nth(1).unwrap(), "2,1,4,480,,,,");
    let json = stdout(&["moments", "--r", "2", "--lambda", "1", "--n", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!(v[0]["mc_moment"].is_null());
    assert_eq!(v[0]["central_moment"], 480.0);
}

#[test]
fn seeded_monte_carlo_is_reproducible_and_sensible() {
    let args = ["moments", "--r", "4", "--lambda", "1", "--samples", "50000", "--seed", "5", "--format", "csv"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    let exact = col(&a, "central_moment");
    let mc = col(&a, "mc_moment");
    let se = col(&a, "mc_std_error");
    for k in 0..exact.len() {
        assert!((mc[k] - exact[k]).abs() <= 5.0 * se[k], "{k}: {} vs {}", mc[k], exact[k]);
    }
    let other =
        stdout(&["moments", "--r", "4", "--lambda", "1", "--samples", "50000", "--seed", "6", "--format", "csv"]);
    assert_ne!(a, other);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code().unwrap();
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&["survival", "--help"]), 0);
    // usage
    assert_eq!(code(&[]), 1);
    assert_eq!(code(&["bogus"]), 1);
    assert_eq!(code(&["survival", "--r", "4"]), 1);
    assert_eq!(code(&["survival", "--r", "4", "--a", "1", "--delta", "0"]), 1);
    assert_eq!(code(&["scan", "--r", "1:10:0"]), 1);
    assert_eq!(code(&["scan", "--r", "1:10:2000000"]), 1);
    assert_eq!(code(&["scan", "--r", "1:10:1000", "--lambda", "0:1:1001"]), 1);
    assert_eq!(code(&["survival", "--r", "4", "--a", "1", "--format", "xml"]), 1);
    assert_eq!(code(&["survival", "--r", "4", "--a", "1", "--rel-tol", "0.5"]), 1);
    // domain
    assert_eq!(code(&["survival", "--r", "-1", "--a", "1"]), 2);
    assert_eq!(code(&["survival", "--r", "4", "--lambda", "-2", "--a", "1"]), 2);
    assert_eq!(code(&["scan", "--r", "10", "--order", "4"]), 2);
    assert_eq!(code(&["moments", "--r", "4", "--n", "5"]), 2);
    assert_eq!(code(&["detect", "--target", "0.7"]), 2);
    assert_eq!(code(&["detect", "--target", "0.01", "--order", "3"]), 2);
    assert_eq!(code(&["llt", "--r", "10", "--a", "-1"]), 2);
    assert_eq!(code(&["llt", "--r", "10", "--delta", "0", "--eta", "1.5"]), 2);
    // convergence
    assert_eq!(code(&["survival", "--r", "10", "--lambda", "1e7", "--a", "1e7", "--max-terms", "100"]), 3);
}

#[test]
fn errors_go_to_stderr_only() {
    let out = run(&["survival", "--r", "-1", "--a", "1"]);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn bad_thread_setting_is_a_usage_error() {
    let out = run_with_threads(&["constants", "--order", "0"], Some("zero"));
    assert_eq!(out.status.code(), Some(1));
    let out = run_with_threads(&["constants", "--order", "0"], Some("0"));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn validity_warning_on_large_noncentrality() {
    let out = run(&["scan", "--r", "16", "--lambda", "9", "--order", "0", "--format", "csv"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let out = run(&["scan", "--r", "16", "--lambda", "1", "--order", "0", "--format", "csv"]);
    assert!(out.stderr.is_empty());
}

#[test]
fn order_three_at_r_8_breaks_down_in_the_far_tail() {
    let text = stdout(&["scan", "--r", "8", "--lambda", "0", "--order", "2,3", "--format", "csv"]);
    let e = col(&text, "max_error");
    // the shift d3 / r swamps the threshold for |δ| near 8 at this r
    assert!(e[0] < 0.015_161_83);
    assert!(e[1] > e[0], "{e:?}");
}
