use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn fracsq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracsq"))
        .args(args)
        .output()
        .expect("spawn fracsq")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn small_sweep(dir: &Path, doublings: &str) -> Output {
    fracsq(&[
        "sweep",
        "--n-min",
        "0",
        "--n-max",
        "1",
        "--n-step",
        "0.5",
        "--ladder-base",
        "50",
        "--doublings",
        doublings,
        "--workers",
        "2",
        "--out",
        dir.to_str().unwrap(),
    ])
}

#[test]
fn sweep_analyze_plot_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("run");
    let out = small_sweep(&run, "4");
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(run.join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3 * 5);
    assert!(run.join("manifest.json").exists());

    let out = fracsq(&[
        "analyze",
        "--run",
        run.to_str().unwrap(),
        "--alpha-windows",
        "e=0:1;m=0:1",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(run.join("analysis/analysis.csv").exists());
    assert!(run.join("analysis/alpha_lines.json").exists());

    let out = fracsq(&["plot", "--run", run.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    for panel in [
        "fig1a", "fig1b", "fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b", "fig5a", "fig5b",
    ] {
        assert!(run.join(format!("plots/{panel}.dat")).exists(), "{panel}");
    }
    assert!(run.join("plots/plot.gp").exists());
}

#[test]
fn resume_keeps_finished_cells() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&small_sweep(dir.path(), "1")), 0);
    let out = fracsq(&[
        "sweep",
        "--n-min",
        "0",
        "--n-max",
        "1",
        "--n-step",
        "0.5",
        "--ladder-base",
        "50",
        "--doublings",
        "2",
        "--resume",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(
        String::from_utf8_lossy(&out.stderr).contains("9 cells (3 computed"),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn flagged_fits_exit_with_partial_status() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&small_sweep(dir.path(), "1")), 0);
    let out = fracsq(&["analyze", "--run", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let analysis = fs::read_to_string(dir.path().join("analysis/analysis.csv")).unwrap();
    assert!(analysis.lines().skip(1).all(|l| !l.ends_with(",ok")));
}

#[test]
fn failed_cells_exit_with_partial_status() {
    let dir = tempfile::tempdir().unwrap();
    let out = fracsq(&[
        "sweep",
        "--n-min",
        "200",
        "--n-max",
        "200",
        "--ladder-base",
        "400",
        "--doublings",
        "0",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert!(csv.contains("error: "));
}

#[test]
fn configuration_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad_grid = fracsq(&[
        "sweep",
        "--n-min",
        "3",
        "--n-max",
        "1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&bad_grid), 1);
    assert_eq!(
        code(&fracsq(&[
            "sweep",
            "--ladder-base",
            "251",
            "--out",
            dir.path().to_str().unwrap()
        ])),
        1
    );
    assert_eq!(
        code(&fracsq(&[
            "analyze",
            "--run",
            dir.path().join("missing").to_str().unwrap()
        ])),
        1
    );
    assert_eq!(
        code(&fracsq(&["plot", "--run", dir.path().to_str().unwrap()])),
        1
    );
    assert_eq!(code(&fracsq(&["toy", "--max-size", "65"])), 1);
    assert_eq!(
        code(&fracsq(&[
            "analyze",
            "--run",
            ".",
            "--alpha-windows",
            "q=1:2"
        ])),
        1
    );
    assert_eq!(code(&fracsq(&["sweep", "--bogus"])), 1);
    assert_eq!(code(&fracsq(&["--help"])), 0);
}

#[test]
fn toy_table() {
    let out = fracsq(&["toy", "--max-size", "8", "--ratios", "10,100"]);
    assert_eq!(code(&out), 0);
    let table = String::from_utf8(out.stdout).unwrap();
    assert_eq!(table.lines().count(), 16);
    assert!(table.trim_end().ends_with("overall: pass"));
}

#[test]
fn dynamics_writes_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.csv");
    let out = fracsq(&[
        "dynamics",
        "--n",
        "2",
        "--N",
        "2",
        "--r-max",
        "3",
        "--samples",
        "31",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,m_expect,photon_number,norm"));
    let beta = 2f64.sqrt();
    for line in lines {
        let f: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        assert!((f[1] - (beta * f[0]).sin().powi(2)).abs() < 1e-9);
        assert!((f[2] - 2.0 * f[1]).abs() < 1e-12);
        assert!((f[3] - 1.0).abs() < 1e-12);
    }
    assert_eq!(text.lines().count(), 32);
}
