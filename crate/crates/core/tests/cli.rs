use std::process::Command;

use vo_tfmid::cli::{config_from_args, execute, main_with_args, EXIT_CONFIG, EXIT_OK, EXIT_THRESHOLD};

const BIN: &str = env!("CARGO_BIN_EXE_vo-tfmid");

fn run_bin(args: &[&str], envs: &[(&str, &str)]) -> (i32, String, String) {
    let out = Command::new(BIN).args(args).envs(envs.iter().copied()).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

// Frozen output of the default scheme at N = 64, M = 16 on this build.
#[test]
fn golden_solve_csv() {
    let (code, out, _) = run_bin(&["solve", "--N", "64", "--Mx", "16"], &[]);
    assert_eq!(code, EXIT_OK);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("level,step,err_l2,order,seconds"));
    let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(fields[..2], ["64", "0.015625"]);
    let err: f64 = fields[2].parse().unwrap();
    approx::assert_relative_eq!(err, 0.001_515_797_335_585_866, max_relative = 1e-9);
    assert_eq!(fields[3..], ["", ""]);
    assert_eq!(lines.next(), None);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["compare", "--N", "16", "--Mx", "8"];
    let first = run_bin(&args, &[]).1;
    assert_eq!(first, run_bin(&args, &[("VO_TFMID_THREADS", "1")]).1);
    assert_eq!(first, run_bin(&args, &[("VO_TFMID_THREADS", "3")]).1);
}

#[test]
fn config_file_and_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("study.cfg");
    let output = dir.path().join("orders.csv");
    std::fs::write(&config, "# time study\nscheme = adi_qsc_l1p\nN = 2^3, 2^4\nMx = 8\nformat = csv\n").unwrap();
    let (code, stdout, _) = run_bin(
        &["convergence", "-c", config.to_str().unwrap(), "--output", output.to_str().unwrap()],
        &[],
    );
    assert_eq!(code, EXIT_OK);
    assert!(stdout.is_empty());
    let body = std::fs::read_to_string(&output).unwrap();
    assert_eq!(body.lines().count(), 3);
    assert!(body.lines().nth(2).unwrap().starts_with("16,0.0625,"));
}

#[test]
fn solution_file_lists_collocation_points() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u.csv");
    let code = main_with_args(["vo-tfmid", "solve", "--N", "8", "--Mx", "4", "--solution", path.to_str().unwrap(), "-o", dir.path().join("r.csv").to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let body = std::fs::read_to_string(&path).unwrap();
    assert_eq!(body.lines().next(), Some("x,y,u"));
    assert_eq!(body.lines().count(), 1 + 6 * 6);
}

#[test]
fn exit_codes() {
    assert_eq!(run_bin(&["solve", "--scheme", "opt_adi_qsc_fl1p", "--Mx", "5"], &[]).0, EXIT_CONFIG);
    assert_eq!(run_bin(&["solve", "--alpha", "a7"], &[]).0, EXIT_CONFIG);
    assert_eq!(run_bin(&["solve"], &[("VO_TFMID_THREADS", "zero")]).0, EXIT_CONFIG);
    assert_eq!(run_bin(&["bogus"], &[]).0, EXIT_CONFIG);
    assert_eq!(run_bin(&["properties", "--filter", "linalg_band"], &[]).0, EXIT_OK);
    // M = 8 puts a spatial floor under the temporal error
    let (code, _, err) = run_bin(&["convergence", "--assert", "--N", "16,32,64,128", "--Mx", "8"], &[]);
    assert_eq!(code, EXIT_THRESHOLD, "{err}");
    assert!(err.contains("outside"));
}

#[test]
fn markdown_convergence_table() {
    let cfg = config_from_args(["vo-tfmid", "convergence", "--Mx", "8,16", "--N", "64", "--format", "md"]).unwrap();
    let out = execute(&cfg).unwrap();
    assert!(out.body.contains("| Δx | Err | Order |"), "{}", out.body);
    assert!(out.body.contains("| 2^-4 |"));
    assert!(!out.threshold_failed);
}
