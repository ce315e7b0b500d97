//! End-to-end tests of the binary: exit-code contract, artifact shapes,
//! determinism, and the config round trip through a real run.

use std::path::PathBuf;
use std::process::Command;
use std::sync::atomic::{AtomicU32, Ordering};

const GOOD: &str = "\
# bonded patch reference constants (SI units)
e1 = 120e9
nu1 = 0.5
h1 = 5e-2
e2 = 95e9
nu2 = 0.3
h0 = 5e-4
mu0 = 0.117e9
t_load = 1
mode = solve
case = auto
x_min = 1e-3
x_max = 0.5
x_points = 24
x_spacing = log
";

const MALFORMED: &str = "\
e1 = 120e9
nu1 = 0.5
h1 = 5e-2
e2 = 95e9
nu2 = 0.7        # outside [0, 0.5)
h0 = 5e-4
mu0 = not_a_number
t_load = 1
mode = warp
";

/// Numerically hostile: k = 1e-12 * lambda, far below the resolvable
/// spectral shoulder.
const HOSTILE: &str = "\
e1 = 120e9
nu1 = 0.5
h1 = 5e-2
e2 = 95e9
nu2 = 0.3
h0 = 2.2425e-15
mu0 = 0.117e9
t_load = 1
mode = solve
x_min = 1e-3
x_max = 0.5
x_points = 8
";

static COUNTER: AtomicU32 = AtomicU32::new(0);

fn scratch_dir(tag: &str) -> PathBuf {
    let n = COUNTER.fetch_add(1, Ordering::Relaxed);
    let dir = std::env::temp_dir().join(format!(
        "whcontact-cli-test-{}-{}-{}",
        std::process::id(),
        tag,
        n
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_cli(config: &str, tag: &str, extra: &[&str]) -> (i32, PathBuf) {
    let dir = scratch_dir(tag);
    let config_path = dir.join("run.cfg");
    std::fs::write(&config_path, config).unwrap();
    let out_dir = dir.join("out");
    let status = Command::new(env!("CARGO_BIN_EXE_whcontact"))
        .arg("--config")
        .arg(&config_path)
        .arg("--output")
        .arg(&out_dir)
        .args(extra)
        .status()
        .unwrap();
    (status.code().unwrap_or(-1), out_dir)
}

#[test]
fn good_config_exits_zero_and_writes_artifacts() {
    let (code, out) = run_cli(GOOD, "good", &[]);
    assert_eq!(code, 0);
    let stress = std::fs::read_to_string(out.join("stress.csv")).unwrap();
    assert!(stress.starts_with("x,tau,phi,method\n"));
    assert!(stress.ends_with('\n'));
    assert_eq!(stress.lines().count(), 25); // header + 24 rows
    let row: Vec<&str> = stress.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row.len(), 4);
    assert_eq!(row[3], "wiener_hopf_B"); // auto resolves to case B for k > 0
    let tau0: f64 = row[1].parse().unwrap();
    assert!(tau0 > 0.0);
    let cert = std::fs::read_to_string(out.join("certificate.json")).unwrap();
    assert!(cert.contains("\"max_jump_residual\""));
    assert!(cert.contains("\"passes\": true"));
}

#[test]
fn malformed_config_exits_two() {
    let (code, out) = run_cli(MALFORMED, "malformed", &[]);
    assert_eq!(code, 2);
    assert!(!out.join("stress.csv").exists());
}

#[test]
fn hostile_stiffness_exits_three_with_diagnostics() {
    let (code, out) = run_cli(HOSTILE, "hostile", &[]);
    assert_eq!(code, 3);
    let diag = std::fs::read_to_string(out.join("diagnostics.json")).unwrap();
    assert!(diag.contains("numerical-failure"));
}

#[test]
fn identical_configs_produce_bit_identical_csv() {
    let (code1, out1) = run_cli(GOOD, "det1", &[]);
    let (code2, out2) = run_cli(GOOD, "det2", &[]);
    assert_eq!(code1, 0);
    assert_eq!(code2, 0);
    let a = std::fs::read(out1.join("stress.csv")).unwrap();
    let b = std::fs::read(out2.join("stress.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn sweep_mode_writes_ratio_table() {
    let config = format!(
        "{}k_list = 3.42e-2, 1.52e-2\n",
        GOOD.replace("mode = solve", "mode = sweep")
    );
    let dir = scratch_dir("sweep");
    let config_path = dir.join("run.cfg");
    std::fs::write(&config_path, &config).unwrap();
    let out_dir = dir.join("out");
    let status = Command::new(env!("CARGO_BIN_EXE_whcontact"))
        .arg("--config")
        .arg(&config_path)
        .arg("--output")
        .arg(&out_dir)
        .env("WHCONTACT_THREADS", "2")
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let sweep = std::fs::read_to_string(out_dir.join("sweep.csv")).unwrap();
    let mut lines = sweep.lines();
    assert_eq!(lines.next(), Some("k,tau0,alpha,ratio_to_first_row"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    let second: Vec<&str> = lines.next().unwrap().split(',').collect();
    let r1: f64 = first[3].parse().unwrap();
    let r2: f64 = second[3].parse().unwrap();
    assert_eq!(r1, 1.0);
    assert!(r2 > 1.0, "tau0 should rise as k falls, ratio {r2}");
}

#[test]
fn mode_override_is_revalidated() {
    // GOOD has no k_list, so forcing sweep mode must fail up front.
    let (code, _) = run_cli(GOOD, "override", &["--mode", "sweep"]);
    assert_eq!(code, 2);
}

#[test]
fn help_and_usage_errors() {
    let status = Command::new(env!("CARGO_BIN_EXE_whcontact"))
        .arg("--help")
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let status = Command::new(env!("CARGO_BIN_EXE_whcontact"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    let status = Command::new(env!("CARGO_BIN_EXE_whcontact"))
        .args(["--config", "/nonexistent/path.cfg"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}
