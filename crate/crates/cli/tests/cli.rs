use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fbsplit_cli::{parse_trace_csv, CliError};
use fbsplit_core::imaging::{encode_pgm, load_pgm, phantom, PgmFormat};

const BUNDLED: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/phantom64.pgm");

fn bundled() -> PathBuf {
    PathBuf::from(BUNDLED)
}

fn fbsplit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fbsplit"))
        .args(args)
        .output()
        .expect("spawn fbsplit")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn degrade_into(dir: &Path, extra: &[&str]) -> PathBuf {
    let out = dir.join("deg.pgm");
    let mut args = vec!["degrade", "--input", BUNDLED, "--output", s(&out)];
    args.extend_from_slice(extra);
    let o = fbsplit(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn bundled_image_is_the_phantom() {
    let bytes = std::fs::read(bundled()).unwrap();
    assert_eq!(bytes, encode_pgm(&phantom(64, 64), PgmFormat::Binary));
}

#[test]
fn degrade_with_delta_and_no_noise_keeps_pixels() {
    let dir = tempfile::tempdir().unwrap();
    let out = degrade_into(dir.path(), &["--kernel", "delta", "--noise-sigma", "0"]);
    let a = load_pgm(bundled()).unwrap();
    let b = load_pgm(&out).unwrap();
    for (x, y) in a.pixels().iter().zip(b.pixels()) {
        assert!((x - y).abs() <= 1.0 / 510.0);
    }
    let meta = std::fs::read_to_string(dir.path().join("deg.pgm.meta")).unwrap();
    for key in [
        "kernel = delta",
        "noise_sigma = 0e0",
        "seed = 42",
        "width = 64",
        "lipschitz = ",
    ] {
        assert!(meta.contains(key), "{meta}");
    }
}

#[test]
fn degrade_is_reproducible_and_seed_sensitive() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let d3 = tempfile::tempdir().unwrap();
    let args = ["--kernel", "motion:7,30", "--seed", "5"];
    let a = std::fs::read(degrade_into(d1.path(), &args)).unwrap();
    let b = std::fs::read(degrade_into(d2.path(), &args)).unwrap();
    let c = std::fs::read(degrade_into(
        d3.path(),
        &["--kernel", "motion:7,30", "--seed", "6"],
    ))
    .unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn degrade_errors_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.pgm");
    let o = fbsplit(&[
        "degrade",
        "--input",
        BUNDLED,
        "--output",
        s(&out),
        "--kernel",
        "gaussian:4,2",
    ]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("odd"));
    let missing = dir.path().join("nope.pgm");
    let o = fbsplit(&[
        "degrade",
        "--input",
        s(&missing),
        "--output",
        s(&out),
        "--kernel",
        "delta",
    ]);
    assert_eq!(code(&o), 3);
    let bad = dir.path().join("bad.pgm");
    std::fs::write(&bad, b"P5\n4 4\n255\n\x01\x02").unwrap();
    let o = fbsplit(&[
        "degrade",
        "--input",
        s(&bad),
        "--output",
        s(&out),
        "--kernel",
        "delta",
    ]);
    assert_eq!(code(&o), 3);
    assert!(!out.exists(), "no partial output on failure");
    assert_eq!(code(&fbsplit(&["degrade", "--bogus"])), 2);
    assert_eq!(code(&fbsplit(&["--help"])), 0);
}

#[test]
fn restore_with_zero_iterations_returns_the_input() {
    let dir = tempfile::tempdir().unwrap();
    let deg = degrade_into(dir.path(), &["--kernel", "gaussian:5,1"]);
    let restored = dir.path().join("r.pgm");
    let trace = dir.path().join("t.csv");
    let o = fbsplit(&[
        "restore",
        "--input",
        s(&deg),
        "--original",
        BUNDLED,
        "--iters",
        "0",
        "--output",
        s(&restored),
        "--trace",
        s(&trace),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(
        std::fs::read(&deg).unwrap(),
        std::fs::read(&restored).unwrap()
    );
    let rows = parse_trace_csv(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].iter, 0);
}

#[test]
fn restore_writes_requested_checkpoints_and_reads_sidecar_kernel() {
    let dir = tempfile::tempdir().unwrap();
    let deg = degrade_into(dir.path(), &["--kernel", "gaussian:9,4"]);
    let trace = dir.path().join("t.csv");
    let o = fbsplit(&[
        "restore",
        "--input",
        s(&deg),
        "--original",
        BUNDLED,
        "--algorithm",
        "new",
        "--alpha",
        "const:0.5",
        "--theta",
        "const:0.1",
        "--beta",
        "harmonic:0.1",
        "--lambda",
        "0.99",
        "--contraction",
        "0.99",
        "--rho",
        "0.0001",
        "--iters",
        "50",
        "--checkpoints",
        "1,5,10,25,50",
        "--trace",
        s(&trace),
        "--omit-timing",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&trace).unwrap();
    assert!(text.starts_with("iter,snr_db,objective,residual_m_norm,elapsed_s\n"));
    assert!(!text.contains('\r'));
    let rows = parse_trace_csv(&text).unwrap();
    let iters: Vec<usize> = rows.iter().map(|r| r.iter).collect();
    assert_eq!(iters, [0, 1, 5, 10, 25, 50]);
    assert!(rows
        .iter()
        .all(|r| r.snr_db.is_finite() && r.elapsed_s == 0.0));
    assert!(rows[5].snr_db > rows[1].snr_db);
    let meta = std::fs::read_to_string(dir.path().join("t.csv.meta")).unwrap();
    assert!(
        meta.contains("algorithm = new") && meta.contains("seed = 42"),
        "{meta}"
    );
}

#[test]
fn restore_needs_an_original() {
    let dir = tempfile::tempdir().unwrap();
    let deg = degrade_into(dir.path(), &["--kernel", "delta"]);
    let o = fbsplit(&["restore", "--input", s(&deg), "--iters", "3"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--original"));
}

#[test]
fn restore_without_kernel_or_sidecar_is_a_usage_error() {
    let o = fbsplit(&[
        "restore",
        "--input",
        BUNDLED,
        "--original",
        BUNDLED,
        "--iters",
        "1",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn config_validation_happens_before_compute() {
    let dir = tempfile::tempdir().unwrap();
    let deg = degrade_into(dir.path(), &["--kernel", "delta"]);
    let out = dir.path().join("r.pgm");
    for bad in [
        vec!["--algorithm", "apfbnsm", "--alpha", "const:1"],
        vec!["--algorithm", "new", "--lambda", "1.5"],
        vec!["--theta", "const:1.2"],
        vec!["--contraction", "1"],
        vec!["--checkpoints", "5,1"],
        vec!["--algorithm", "ista"],
    ] {
        let mut args = vec![
            "restore",
            "--input",
            s(&deg),
            "--original",
            BUNDLED,
            "--output",
            s(&out),
        ];
        args.extend(bad.iter().copied());
        let o = fbsplit(&args);
        assert_eq!(
            code(&o),
            2,
            "{bad:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(!out.exists());
    }
}

#[test]
fn divergence_exits_with_four() {
    let dir = tempfile::tempdir().unwrap();
    let deg = degrade_into(
        dir.path(),
        &["--kernel", "gaussian:3,1", "--noise-sigma", "0.05"],
    );
    let o = fbsplit(&[
        "restore",
        "--input",
        s(&deg),
        "--original",
        BUNDLED,
        "--algorithm",
        "lorenz-pock",
        "--lambda",
        "1.99",
        "--theta",
        "const:0.999",
        "--rho",
        "0",
        "--iters",
        "20000",
    ]);
    assert_eq!(code(&o), 4, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("iteration"));
    assert_eq!(
        CliError::from(fbsplit_core::Error::Divergence { iteration: 3 }).exit_code(),
        4
    );
}

#[test]
fn config_file_fills_gaps_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let deg = degrade_into(dir.path(), &["--kernel", "gaussian:5,2"]);
    let table = dir.path().join("table.csv");
    let cfg = dir.path().join("exp.cfg");
    std::fs::write(
        &cfg,
        format!(
            "# comparison\ninput = {}\noriginal = {}\nalgorithms = fbs, new\ncheckpoints = 1,2,3\n\
             table = {}\niters = 3\nrho = 0.001\n",
            s(&deg),
            BUNDLED,
            s(&table)
        ),
    )
    .unwrap();
    let o = fbsplit(&[
        "compare",
        "--config",
        s(&cfg),
        "--checkpoints",
        "2,4",
        "--iters",
        "4",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&table).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "iter,fbs,new");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("2,") && lines[2].starts_with("4,"));

    std::fs::write(&cfg, "colour = red\n").unwrap();
    assert_eq!(code(&fbsplit(&["compare", "--config", s(&cfg)])), 2);
    assert_eq!(
        code(&fbsplit(&[
            "compare",
            "--config",
            s(&dir.path().join("none.cfg"))
        ])),
        3
    );
}

#[test]
fn compare_table_schema_and_argument_checks() {
    let dir = tempfile::tempdir().unwrap();
    let deg = degrade_into(dir.path(), &["--kernel", "gaussian:5,2"]);
    let table = dir.path().join("t.csv");
    let traces = dir.path().join("traces");
    let images = dir.path().join("images");
    let base = [
        "compare",
        "--input",
        s(&deg),
        "--original",
        BUNDLED,
        "--table",
        s(&table),
    ];

    let mut args = base.to_vec();
    args.extend(["--algorithms", "new"]);
    assert_eq!(code(&fbsplit(&args)), 2);
    let mut args = base.to_vec();
    args.extend(["--algorithms", "new,new"]);
    assert_eq!(code(&fbsplit(&args)), 2);
    let mut args = base.to_vec();
    args.extend(["--checkpoints", "1,5", "--iters", "3"]);
    assert_eq!(code(&fbsplit(&args)), 2);

    let mut args = base.to_vec();
    args.extend([
        "--algorithms",
        "new,fbs,apfbnsm",
        "--checkpoints",
        "1,3,7",
        "--trace-dir",
        s(&traces),
        "--output-dir",
        s(&images),
        "--omit-timing",
    ]);
    let o = fbsplit(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&table).unwrap();
    assert_eq!(String::from_utf8_lossy(&o.stdout), text);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "iter,new,fbs,apfbnsm");
    assert_eq!(
        lines
            .iter()
            .skip(1)
            .map(|l| l.split(',').next().unwrap())
            .collect::<Vec<_>>(),
        ["1", "3", "7"]
    );
    assert!(lines.iter().all(|l| l.split(',').count() == 4));
    for alg in ["new", "fbs", "apfbnsm"] {
        let rows =
            parse_trace_csv(&std::fs::read_to_string(traces.join(format!("{alg}.csv"))).unwrap())
                .unwrap();
        assert_eq!(rows.len(), 8);
        assert!(images.join(format!("{alg}.pgm")).exists());
    }
}

#[test]
fn lasso_demo_outcomes() {
    let o = fbsplit(&["lasso-demo", "--dimension", "20", "--iters", "5000"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report = String::from_utf8_lossy(&o.stdout);
    for alg in [
        "fbs",
        "prox-grad",
        "moudafi-oliny",
        "lorenz-pock",
        "apfbnsm",
        "new",
    ] {
        assert!(
            report
                .lines()
                .any(|l| l.starts_with(alg) && l.ends_with("ok")),
            "{report}"
        );
    }
    let o = fbsplit(&[
        "lasso-demo",
        "--dimension",
        "20",
        "--iters",
        "2",
        "--kkt-target",
        "1e-12",
    ]);
    assert_eq!(code(&o), 1);
    assert_eq!(code(&fbsplit(&["lasso-demo", "--dimension", "1"])), 2);
    assert_eq!(
        code(&fbsplit(&[
            "lasso-demo",
            "--dimension",
            "4",
            "--sparsity",
            "5"
        ])),
        2
    );
}
