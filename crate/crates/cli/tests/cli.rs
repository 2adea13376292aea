use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rational_feast::filters::{FilterKind, FilterSpec, RationalFilter, Shape};
use rational_feast::Complex64;
use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rational-feast"));
    cmd.env_remove("RATIONAL_FEAST_THREADS");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmp_path(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

#[test]
fn filter_design_writes_zolotarev_filter() {
    let dir = tempfile::tempdir().unwrap();
    let path = tmp_path(&dir, "f.json");
    let out = run(&[
        "filter-design",
        "--kind",
        "zolotarev",
        "--m",
        "8",
        "--shape",
        "1e6",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let f = RationalFilter::read_json(&path).unwrap();
    assert_eq!(f.poles().len(), 16);
    assert!(f.poles().iter().all(|z| (z.norm() - 1.0).abs() < 1e-10));
    assert!(stdout(&out).contains("E' bounds"));
}

#[test]
fn filter_design_prints_half_at_edge() {
    let dir = tempfile::tempdir().unwrap();
    let path = tmp_path(&dir, "g.json");
    let out = run(&[
        "filter-design",
        "--kind",
        "gauss",
        "--m",
        "3",
        "--shape",
        "inf",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("r(1)=0.500000"), "{}", stdout(&out));
}

#[test]
fn invalid_filter_flags_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = tmp_path(&dir, "t.json");
    let p = path.to_str().unwrap();
    assert_eq!(
        code(&run(&[
            "filter-design",
            "--kind",
            "trapezoid",
            "--m",
            "0",
            "--out",
            p
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "filter-design",
            "--kind",
            "gauss",
            "--m",
            "3",
            "--gap",
            "0.9",
            "--out",
            p
        ])),
        2
    );
    assert_eq!(
        code(&run(&["filter-design", "--kind", "nonsense", "--out", p])),
        2
    );
    assert_eq!(
        code(&run(&["filter-design", "--unknown-flag", "--out", p])),
        2
    );
    assert_eq!(code(&run(&[])), 2);
}

#[test]
fn designed_filter_round_trips_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    for (kind, m, shape, spec) in [
        (
            "trapezoid",
            "5",
            "1.7",
            FilterSpec::new(FilterKind::Trapezoid, 5, Shape::Finite(1.7)).unwrap(),
        ),
        (
            "gauss",
            "6",
            "inf",
            FilterSpec::new(FilterKind::Gauss, 6, Shape::Infinite).unwrap(),
        ),
        (
            "zolotarev",
            "6",
            "9801",
            FilterSpec::new(FilterKind::Zolotarev, 6, Shape::Finite(9801.0)).unwrap(),
        ),
    ] {
        let path = tmp_path(&dir, &format!("{kind}.json"));
        let out = run(&[
            "filter-design",
            "--kind",
            kind,
            "--m",
            m,
            "--shape",
            shape,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
        let loaded = RationalFilter::read_json(&path).unwrap();
        let built = spec.build().unwrap();
        for i in 0..100 {
            let z = Complex64::new(-2.5 + 0.05 * i as f64, 0.3 * ((i % 5) as f64 - 2.0) + 0.01);
            let (a, b) = (loaded.eval(z).unwrap(), built.eval(z).unwrap());
            assert_eq!(
                (a.re.to_bits(), a.im.to_bits()),
                (b.re.to_bits(), b.im.to_bits()),
                "{kind} at {z}"
            );
        }
    }
}

#[test]
fn zolotarev_gap_flag_matches_range() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (tmp_path(&dir, "a.json"), tmp_path(&dir, "b.json"));
    assert_eq!(
        code(&run(&[
            "filter-design",
            "--m",
            "4",
            "--gap",
            "0.98",
            "--out",
            a.to_str().unwrap()
        ])),
        0
    );
    assert_eq!(
        code(&run(&[
            "filter-design",
            "--m",
            "4",
            "--shape",
            "9801",
            "--out",
            b.to_str().unwrap()
        ])),
        0
    );
    let (fa, fb) = (
        RationalFilter::read_json(&a).unwrap(),
        RationalFilter::read_json(&b).unwrap(),
    );
    for (p, q) in fa.poles().iter().zip(fb.poles()) {
        assert!((p - q).norm() < 1e-12);
    }
}

#[test]
fn factor_table_rows() {
    let out = run(&["factor-table", "--G", "0.98", "--m", "3"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    let cells: Vec<&str> = lines[1].split(',').collect();
    assert_eq!((cells[0], cells[1]), ("0.98", "3"));
    assert_eq!(cells[9], "1.36e-1");

    let dir = tempfile::tempdir().unwrap();
    let path = tmp_path(&dir, "table.csv");
    let out = run(&[
        "factor-table",
        "--G",
        "0.98,0.998",
        "--m",
        "3,6,9,12,15,30,40",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let csv = std::fs::read_to_string(&path).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 14);
    let order: Vec<(String, String)> = rows
        .iter()
        .map(|r| {
            let f: Vec<&str> = r.split(',').collect();
            (f[0].to_string(), f[1].to_string())
        })
        .collect();
    assert_eq!(order[0], ("0.98".into(), "3".into()));
    assert_eq!(order[7], ("0.998".into(), "3".into()));
    assert_eq!(order[13], ("0.998".into(), "40".into()));
    let json: Value =
        serde_json::from_str(&std::fs::read_to_string(path.with_extension("json")).unwrap())
            .unwrap();
    assert_eq!(json.as_array().unwrap().len(), 14);

    assert_eq!(code(&run(&["factor-table", "--G", "--m", "3"])), 2);
    assert_eq!(code(&run(&["factor-table", "--G", "1.5", "--m", "3"])), 2);
}

#[test]
fn solve_diagonal_pencil() {
    let dir = tempfile::tempdir().unwrap();
    let report = tmp_path(&dir, "report.json");
    let out = run(&[
        "solve",
        "--A",
        &data("diag20.mtx"),
        "--B",
        &data("diag20_b.mtx"),
        "--interval",
        "0.2",
        "2.7",
        "--kind",
        "zolotarev",
        "--m",
        "8",
        "--shape",
        "1e6",
        "--n",
        "7",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(
        code(&out),
        0,
        "{}{}",
        stdout(&out),
        String::from_utf8_lossy(&out.stderr)
    );
    // eigenvalues of (diag(1..20), 2I) are i/2
    let json: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let values: Vec<f64> = json["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(values.len(), 5);
    for (i, v) in values.iter().enumerate() {
        assert!((v - 0.5 * (i + 1) as f64).abs() < 1e-12);
    }
    let trace = std::fs::read_to_string(report.with_extension("trace.csv")).unwrap();
    assert!(trace.starts_with("k,count_inside,max_residual"));
    assert_eq!(
        trace.lines().count(),
        1 + json["iterations"].as_array().unwrap().len()
    );
}

#[test]
fn solve_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (tmp_path(&dir, "a.json"), tmp_path(&dir, "b.json"));
    for (path, threads) in [(&a, "1"), (&b, "3")] {
        let out = run(&[
            "solve",
            "--A",
            &data("edge_cluster.mtx"),
            "--interval",
            "0",
            "10",
            "--n",
            "5",
            "--seed",
            "5",
            "--threads",
            threads,
            "--report",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn solve_usage_errors() {
    assert_eq!(
        code(&run(&[
            "solve",
            "--A",
            &data("diag20.mtx"),
            "--interval",
            "1",
            "1",
            "--n",
            "3"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "solve",
            "--A",
            "/nonexistent.mtx",
            "--interval",
            "0",
            "1",
            "--n",
            "3"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "solve",
            "--A",
            &data("diag20.mtx"),
            "--interval",
            "0",
            "3",
            "--n",
            "0"
        ])),
        2
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = tmp_path(&dir, "bad.mtx");
    std::fs::write(
        &bad,
        "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 x\n",
    )
    .unwrap();
    assert_eq!(
        code(&run(&[
            "solve",
            "--A",
            bad.to_str().unwrap(),
            "--interval",
            "0",
            "3",
            "--n",
            "1"
        ])),
        2
    );
}

#[test]
fn edge_clustered_spectrum_separates_the_filters() {
    let common = [
        "solve",
        "--A",
        "",
        "--interval",
        "0",
        "10",
        "--m",
        "8",
        "--n",
        "5",
    ];
    let a = data("edge_cluster.mtx");
    let mut args: Vec<&str> = common.to_vec();
    args[2] = &a;

    let mut gauss = args.clone();
    gauss.extend(["--kind", "gauss", "--shape", "inf"]);
    let out = run(&gauss);
    assert_eq!(code(&out), 3, "{}", stdout(&out));
    assert!(stdout(&out).starts_with("not converged"));

    let mut zolo = args.clone();
    zolo.extend(["--kind", "zolotarev", "--shape", "1e6"]);
    let out = run(&zolo);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("5 eigenpairs"));
}

#[test]
fn plan_output() {
    let out = run(&[
        "plan",
        "--interval",
        "-2.94",
        "2.94",
        "--parts",
        "3",
        "--m",
        "6",
        "--gap",
        "0.98",
        "--counts",
        "4,4,4",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let json: Value = serde_json::from_slice(&out.stdout).unwrap();
    let parts = json["parts"].as_array().unwrap();
    assert_eq!(parts.len(), 3);
    for p in parts {
        let f = p["predicted_factor"].as_f64().unwrap();
        assert!((f - 7.46e-3).abs() < 5e-6, "{f}");
        assert_eq!(p["suggested_n"], 6);
    }

    let dir = tempfile::tempdir().unwrap();
    let path = tmp_path(&dir, "plan.json");
    let out = run(&[
        "plan",
        "--interval",
        "0",
        "4",
        "--parts",
        "1",
        "--m",
        "4",
        "--R",
        "1e4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let json: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(json["parts"].as_array().unwrap().len(), 1);
    assert_eq!(json["parts"][0]["owned"]["lambda_min"], 0.0);

    assert_eq!(
        code(&run(&[
            "plan",
            "--interval",
            "0",
            "4",
            "--parts",
            "3",
            "--m",
            "4",
            "--counts",
            "1,2"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "plan",
            "--interval",
            "0",
            "4",
            "--parts",
            "0",
            "--m",
            "4"
        ])),
        2
    );
}
