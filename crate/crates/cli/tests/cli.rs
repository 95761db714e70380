use std::process::Command;

fn gbnystrom() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gbnystrom"))
}

#[test]
fn table_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = gbnystrom()
        .args([
            "table",
            "ex5_4",
            "--m-list",
            "8,16",
            "--format",
            "tsv",
            "--out-dir",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let body = std::fs::read_to_string(dir.path().join("ex5_4_table.tsv")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), body);
    assert!(body.starts_with("m\teps(0.01)\teps(0.5)\teps(0.99)\tcond\n8\t"));
    assert!(dir.path().join("ex5_4_table.meta").exists());
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# quick run\nm-list = 4\ns-list = 0.3\nell = 8\n").unwrap();
    let out = gbnystrom()
        .args(["quadrature", "ex3_1", "--ell", "4", "--config"])
        .arg(&cfg)
        .arg("--out-dir")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "m,e(0.3)");
    assert!(lines[1].starts_with("4,"));
    assert_eq!(lines.len(), 2);
    let meta = std::fs::read_to_string(dir.path().join("ex3_1_quadrature.meta")).unwrap();
    assert!(meta.contains("ell=4\n"));
}

#[test]
fn failures_exit_nonzero_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["table", "ex9_9"],
        vec!["table", "ex5_1", "--reference", "closed-form"],
        vec!["table", "ex5_4", "--ell", "4,8"],
        vec!["table", "ex5_4", "--m-list", "4,x"],
        vec!["figure", "ex5_2"],
    ] {
        let out = gbnystrom()
            .args(&args)
            .arg("--out-dir")
            .arg(dir.path())
            .output()
            .unwrap();
        assert!(!out.status.success(), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.starts_with("error: "), "{args:?}: {err}");
    }
}

#[test]
fn list_shows_every_problem() {
    let out = gbnystrom().arg("list").output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    for id in ["ex3_1", "ex3_2", "ex5_1", "ex5_2", "ex5_3", "ex5_4"] {
        assert!(text.contains(id));
    }
}
