use std::path::Path;
use std::process::{Command, Output};

fn geb(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geb"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn geb")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn generate_writes_header_and_is_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let o = geb(
        &[
            "generate", "--count", "1024", "--width", "16", "--seed", "7", "--out", "a.gdb",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    assert!(stdout(&o).contains("N: 1024"));
    geb(
        &[
            "generate", "--count", "1024", "--width", "16", "--seed", "7", "--out", "b.gdb",
        ],
        dir.path(),
    );
    let a = std::fs::read(dir.path().join("a.gdb")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.gdb")).unwrap());
    assert_eq!(&a[..4], b"GDB1");
    assert_eq!(u64::from_le_bytes(a[4..12].try_into().unwrap()), 1024);
}

#[test]
fn generate_with_planting_reports_matches() {
    let dir = tempfile::tempdir().unwrap();
    let o = geb(
        &[
            "generate",
            "--count",
            "512",
            "--width",
            "12",
            "--seed",
            "1",
            "--out",
            "p.gdb",
            "--plant-criterion",
            "equality:abc",
            "--plant-count",
            "3",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("matches: 3"));
}

#[test]
fn plant_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    // an always-false criterion cannot be planted
    std::fs::write(
        dir.path().join("f.crit"),
        "criterion d=4\ng0 = XOR x0 x0\nout = g0\n",
    )
    .unwrap();
    let o = geb(
        &[
            "generate",
            "--count",
            "8",
            "--width",
            "4",
            "--seed",
            "1",
            "--out",
            "x.gdb",
            "--plant-criterion",
            "f.crit",
            "--plant-count",
            "1",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["generate", "--count", "8"][..],
        &["analyze", "--N", "10", "--t", "1", "--p-list", "4"][..],
        &[
            "analyze", "--N", "10", "--t", "1", "--p-list", "4", "--n-list", "11",
        ][..],
        &[
            "analyze",
            "--N",
            "10",
            "--t",
            "1",
            "--p-list",
            "0",
            "--equal-investment",
        ][..],
        &[
            "generate", "--count", "8", "--width", "0", "--seed", "1", "--out", "z.gdb",
        ][..],
        &["bogus"][..],
    ] {
        assert_eq!(geb(args, dir.path()).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(geb(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn malformed_database_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.gdb"), b"NOPE and some bytes").unwrap();
    std::fs::write(dir.path().join("short.gdb"), b"GDB1\x10").unwrap();
    for db in ["bad.gdb", "short.gdb", "missing.gdb"] {
        let o = geb(
            &[
                "simulate",
                "--db",
                db,
                "--criterion",
                "equality:1",
                "--mode",
                "classical",
                "--n",
                "1",
                "--out",
                "o.csv",
            ],
            dir.path(),
        );
        assert_eq!(o.status.code(), Some(1), "{db}");
        assert!(!String::from_utf8_lossy(&o.stderr).contains("panicked"));
    }
}

#[test]
fn malformed_criterion_file_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    geb(
        &[
            "generate", "--count", "16", "--width", "4", "--seed", "1", "--out", "db.gdb",
        ],
        dir.path(),
    );
    std::fs::write(
        dir.path().join("c.crit"),
        "criterion d=4\ng0 = NOT g99\nout = g0\n",
    )
    .unwrap();
    let o = geb(
        &[
            "simulate",
            "--db",
            "db.gdb",
            "--criterion",
            "c.crit",
            "--mode",
            "classical",
            "--n",
            "4",
            "--out",
            "o.csv",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn simulate_classical_and_quantum() {
    let dir = tempfile::tempdir().unwrap();
    geb(
        &[
            "generate",
            "--count",
            "256",
            "--width",
            "10",
            "--seed",
            "3",
            "--out",
            "db.gdb",
            "--plant-criterion",
            "equality:2f1",
            "--plant-count",
            "1",
        ],
        dir.path(),
    );
    let o = geb(
        &[
            "simulate",
            "--db",
            "db.gdb",
            "--criterion",
            "equality:2f1",
            "--mode",
            "classical",
            "--n",
            "32",
            "--reps",
            "3",
            "--out",
            "c.csv",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("found rate: 1\n"));
    let csv = std::fs::read_to_string(dir.path().join("c.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "run_id,mode,N,d,n,p,t,n1_total,found,found_index,cycles,propagation_cycles,rounds_used,model_cycles,seed"
    );
    assert_eq!(lines.count(), 3);
    assert!(!csv.contains('\r'));

    let o = geb(
        &[
            "simulate",
            "--db",
            "db.gdb",
            "--criterion",
            "equality:2f1",
            "--mode",
            "quantum",
            "--n",
            "4",
            "--reps",
            "20",
            "--seed",
            "9",
            "--out",
            "q.csv",
            "--print-report",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("found rate: 1\n"));
    assert!(out.contains("partition.63: "));

    // --append adds rows without a second header
    geb(
        &[
            "simulate",
            "--db",
            "db.gdb",
            "--criterion",
            "equality:2f1",
            "--mode",
            "quantum",
            "--n",
            "4",
            "--reps",
            "2",
            "--out",
            "q.csv",
            "--append",
        ],
        dir.path(),
    );
    let csv = std::fs::read_to_string(dir.path().join("q.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 20 + 2);
    assert_eq!(csv.matches("run_id").count(), 1);
}

#[test]
fn simulate_with_cnf_source() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("f.cnf"), "p cnf 3 2\n1 2 0\n-3 0\n").unwrap();
    geb(
        &[
            "generate", "--count", "64", "--width", "6", "--seed", "2", "--out", "db.gdb",
        ],
        dir.path(),
    );
    let o = geb(
        &[
            "simulate",
            "--db",
            "db.gdb",
            "--criterion",
            "cnf:f.cnf",
            "--mode",
            "quantum",
            "--equal-investment",
            "--reps",
            "5",
            "--out",
            "q.csv",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{o:?}");
    // NOT x2, OR, AND: p = 3
    assert!(stdout(&o).contains("p: 3\n"));
}

#[test]
fn sweep_rows_and_monotone_model() {
    let dir = tempfile::tempdir().unwrap();
    let o = geb(
        &[
            "sweep",
            "--N",
            "1024",
            "--d",
            "12",
            "--criterion",
            "equality:5a5",
            "--n-list",
            "128",
            "--reps",
            "2",
            "--out",
            "one.csv",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{o:?}");
    let csv = std::fs::read_to_string(dir.path().join("one.csv")).unwrap();
    let kinds: Vec<&str> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(kinds, ["classical", "quantum", "comparison"]);

    geb(
        &[
            "sweep",
            "--N",
            "1024",
            "--d",
            "12",
            "--criterion",
            "equality:5a5",
            "--n-list",
            "256,64,16,4",
            "--reps",
            "2",
            "--out",
            "desc.csv",
        ],
        dir.path(),
    );
    let csv = std::fs::read_to_string(dir.path().join("desc.csv")).unwrap();
    let model: Vec<f64> = csv
        .lines()
        .filter(|l| l.starts_with("comparison"))
        .map(|l| l.split(',').nth(11).unwrap().parse().unwrap())
        .collect();
    assert_eq!(model, [16.0, 8.0, 4.0, 2.0]);
}
