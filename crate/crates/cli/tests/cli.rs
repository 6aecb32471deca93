use std::path::PathBuf;
use std::process::{Command, Output};

fn subdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subdiff")).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("subdiff-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn solve_writes_dirichlet_final_frame() {
    let out = subdiff(&["solve", "--problem", "order1", "--alpha", "0.5", "--nx", "64", "--dt", "1e-3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "x,u");
    assert_eq!(rows.len(), 66);
    let u = |row: &str| row.split(',').nth(1).unwrap().parse::<f64>().unwrap();
    assert_eq!(u(rows[1]), 0.0);
    assert_eq!(u(rows[65]), 0.0);
    // exact solution (1+t²)x(1-x) at t = 1, x = 1/2
    assert!((u(rows[33]) - 0.5).abs() < 1e-3);
}

#[test]
fn solve_frame_stride_dumps_history() {
    let out = subdiff(&["solve", "--problem", "errtime4", "--nx", "10", "--dt", "0.1", "--frames", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("t,x,u\n"));
    // frames 0, 4, 8 and the final frame 10, eleven nodes each
    assert_eq!(text.lines().count(), 1 + 4 * 11);
}

#[test]
fn selftest_reports_every_suite() {
    let out = subdiff(&["selftest"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let passes = text.lines().filter(|l| l.starts_with("PASS ")).count();
    assert!(passes >= 12, "{text}");
    assert!(!text.contains("FAIL "));
}

#[test]
fn order_study_csv() {
    let dir = scratch("order");
    let path = dir.join("order.csv");
    let out = subdiff(&[
        "order", "--problem", "order2", "--alpha", "0.5", "--nx", "20", "--dt", "1e-2", "--T", "0.2", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "problem,alpha,h,dt,T,norm_h_h2,norm_h2_h4,p_estimate");
    assert_eq!(rows.len(), 2);
    let p: f64 = rows[1].rsplit(',').next().unwrap().parse().unwrap();
    assert!((p - 2.0).abs() < 0.1, "p = {p}");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn config_file_supplies_values_and_flags_win() {
    let dir = scratch("config");
    let cfg = dir.join("run.toml");
    std::fs::write(&cfg, "command = \"timeerr\"\nproblem = \"errtime3\"\nnx = 10\nalpha = 0.5\nT = 1e-2\nfit_points = 20\n").unwrap();
    let out = subdiff(&["--config", cfg.to_str().unwrap(), "--nx", "20"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("t,error,scaled_error\n"));
    assert!(text.lines().last().unwrap().contains(" n=20 "));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn failures_exit_nonzero_with_field_names() {
    let out = subdiff(&["solve", "--problem", "order1", "--alpha", "1.0"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha"));
    let out = subdiff(&[]);
    assert!(!out.status.success());
    let out = subdiff(&["solve", "--problem", "nope"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope"));
    let out = subdiff(&["timeerr", "--problem", "errtime1", "--nx", "200", "--T", "1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("step"));
}

#[test]
fn thread_variable_validated_and_honoured() {
    let out = Command::new(env!("CARGO_BIN_EXE_subdiff"))
        .args(["order", "--problem", "order1", "--nx", "10", "--dt", "0.1"])
        .env("SUBDIFF_THREADS", "many")
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("SUBDIFF_THREADS"));
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_subdiff"))
            .args(["order", "--problem", "order3", "--nx", "10", "--dt", "0.05"])
            .env("SUBDIFF_THREADS", threads)
            .output()
            .unwrap()
    };
    let (one, three) = (run("1"), run("3"));
    assert!(one.status.success() && three.status.success());
    assert_eq!(one.stdout, three.stdout);
}
