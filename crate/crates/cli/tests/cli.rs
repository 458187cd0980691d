use std::process::Command;

fn twophase() -> Command {
    Command::new(env!("CARGO_BIN_EXE_twophase"))
}

#[test]
fn version_prints_package_version() {
    let out = twophase().arg("version").output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn short_run_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bubble.cfg");
    std::fs::write(&cfg, "case = 1\nnx = 40\nny = 80\ntend = 3\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = twophase()
        .args(["run", cfg.to_str().unwrap(), "--nx", "8", "--ny", "16", "--tend", "0.02", "--case", "2", "--out"])
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(out_dir.join("diagnostics.csv")).unwrap();
    assert!(csv.starts_with("t,y_c,rise_velocity"));
    assert!(csv.lines().last().unwrap().starts_with("2.00000000000000e-2,"));
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "nx = 4\n").unwrap();
    assert_eq!(twophase().args(["run", cfg.to_str().unwrap()]).status().unwrap().code(), Some(2));
    std::fs::write(&cfg, "tend = 1\n").unwrap();
    assert_eq!(twophase().args(["run", cfg.to_str().unwrap(), "--tend=-1"]).status().unwrap().code(), Some(2));
    assert_eq!(twophase().args(["run", cfg.to_str().unwrap(), "--case", "3"]).status().unwrap().code(), Some(2));
    assert_eq!(twophase().args(["run", "/nonexistent/config"]).status().unwrap().code(), Some(2));
}
