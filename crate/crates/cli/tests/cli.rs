use std::path::Path;
use std::process::{Command, Output};

use symlab::io::{parse_grid, parse_scan, parse_table, CHI_HEADER, PAIR_HEADER, SERIES_HEADER};

fn symlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symlab"))
        .args(args)
        .env_remove("SYMLAB_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn chi_verify_example_passes() {
    let o = symlab(&["chi-verify", "--qmax", "50", "--h", "7", "--N", "1000"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CHI_HEADER));
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 50);
    for (i, row) in rows.iter().enumerate() {
        let f: Vec<&str> = row.split(',').collect();
        let q: f64 = f[0].parse().unwrap();
        assert_eq!(q as usize, i + 1);
        let x: i64 = f[2].parse().unwrap();
        assert!((1001..=2000).contains(&x));
        let err: f64 = f[5].parse().unwrap();
        assert!(err <= 1e-9 * q, "{row}");
    }
}

#[test]
fn chi_verify_sampled_is_seeded() {
    let args = [
        "chi-verify",
        "--qmax",
        "30",
        "--h",
        "5",
        "--N",
        "100000",
        "--samples",
        "50",
        "--seed",
        "9",
    ];
    let a = symlab(&args);
    let b = symlab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn chi_verify_zero_tolerance_reports_mismatch() {
    let o = symlab(&["chi-verify", "--qmax", "20", "--h", "3", "--N", "500", "--tol", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("verification failed"));
    assert!(stdout(&o).starts_with(CHI_HEADER));
}

#[test]
fn decompose_example_closes() {
    let o = symlab(&[
        "decompose",
        "--generator",
        "ones",
        "--Q",
        "10",
        "--N",
        "500",
        "--h",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    let i = v["i_direct"].as_f64().unwrap();
    assert_eq!(i, v["i_via_chi"].as_f64().unwrap());
    assert!(v["residual"].as_f64().unwrap().abs() <= 1e-8 * i.max(1.0));
    assert_eq!(v["near_pair_count"].as_u64(), Some(0));
}

#[test]
fn decompose_delta_at_two_is_all_zero() {
    let o = symlab(&[
        "decompose",
        "--generator",
        "delta_at:2",
        "--Q",
        "5",
        "--N",
        "300",
        "--h",
        "6",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    for key in [
        "i_direct",
        "i_via_chi",
        "diagonal",
        "offdiag_delta",
        "offdiag_sigma",
        "residual",
    ] {
        assert_eq!(v[key].as_f64(), Some(0.0), "{key}");
    }
}

#[test]
fn decompose_respects_budget() {
    let o = symlab(&[
        "decompose",
        "--generator",
        "ones",
        "--Q",
        "50",
        "--N",
        "500",
        "--h",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
}

#[test]
fn symmetry_examples() {
    let o = symlab(&["symmetry", "--generator", "delta_one", "--N", "1000", "--h", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["integral"].as_f64(), Some(0.0));

    let o = symlab(&["symmetry", "--function", "d", "--N", "4", "--h", "2"]);
    let v = json(&o);
    assert_eq!(v["integral"].as_f64(), Some(2.5));
    assert_eq!(v["ratio"].as_f64(), Some(0.3125));

    let o = symlab(&["symmetry", "--function", "d", "--N", "4", "--h", "2", "--series"]);
    assert_eq!(stdout(&o), format!("{SERIES_HEADER}\n5,1\n6,0.5\n7,0.5\n8,1\n"));
}

#[test]
fn sieve_round_trips_through_table_reader() {
    let o = symlab(&["sieve", "--function", "d", "--M", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let t = parse_table(&stdout(&o), "stdout", "d").unwrap();
    assert_eq!(
        t.values(),
        &[1.0, 2.0, 2.0, 3.0, 2.0, 4.0, 2.0, 4.0, 3.0, 4.0, 2.0, 6.0]
    );

    // g = ones truncated at Q = 3 counts divisors up to 3
    let o = symlab(&["sieve", "--generator", "ones", "--Q", "3", "--M", "6"]);
    let t = parse_table(&stdout(&o), "stdout", "f").unwrap();
    assert_eq!(t.values(), &[1.0, 2.0, 2.0, 2.0, 1.0, 3.0]);
}

#[test]
fn lemma_scan_at_threshold_is_empty() {
    let o = symlab(&["lemma-scan", "--Q", "60", "--h", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), format!("{PAIR_HEADER}\n"));
}

#[test]
fn lemma_scan_small_threshold_flags_weighted_pairs() {
    let o = symlab(&["lemma-scan", "--Q", "5", "--A", "3", "--h", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).lines().count() > 1);
}

#[test]
fn lemma_scan_all_pairs_count() {
    let o = symlab(&["lemma-scan", "--Q", "10", "--all-pairs"]);
    assert_eq!(o.status.code(), Some(0));
    // reduced fractions in (0, 1/2] with denominator in [2, 10]: 16 of them
    assert_eq!(stdout(&o).lines().count() - 1, 16 * 15 / 2);
}

#[test]
fn scan_and_fit_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.csv");
    std::fs::write(
        &grid,
        "function,N,h,Q\n# small cells\nd,500,5,500\nd,1000,6,1000\n\nd,2000,8,2000\nd,4000,10,4000\ng:ones,300,4,20\n",
    )
    .unwrap();
    let scan = dir.path().join("scan.csv");
    let o = symlab(&[
        "scan",
        "--grid",
        grid.to_str().unwrap(),
        "--out",
        scan.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let rows = parse_scan(&std::fs::read_to_string(&scan).unwrap(), "scan").unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[4].function_name, "g:ones");

    let o = symlab(&["fit", "--scan", scan.to_str().unwrap(), "--function", "d"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["n_points"].as_u64(), Some(4));
    let slope = v["slope"].as_f64().unwrap();
    assert!(slope > 0.5 && slope < 2.0, "{slope}");

    let o = symlab(&[
        "fit",
        "--scan",
        scan.to_str().unwrap(),
        "--function",
        "d",
        "--max-slope",
        "0.1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_grid_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.csv");
    std::fs::write(&grid, "function,N,h,Q\nd,1000,5,1000\nd,100,200,100\n").unwrap();
    let out = dir.path().join("scan.csv");
    let o = symlab(&["scan", "--grid", grid.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("grid.csv:3") && err.contains("h < N"), "{err}");
    assert!(!Path::new(&out).exists());

    std::fs::write(&grid, "# nothing\n\n").unwrap();
    let o = symlab(&["scan", "--grid", grid.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("empty grid"));
}

#[test]
fn validation_errors_exit_one() {
    for args in [
        vec!["symmetry", "--function", "d", "--N", "100", "--h", "200"],
        vec![
            "symmetry",
            "--function",
            "d",
            "--generator",
            "ones",
            "--N",
            "100",
            "--h",
            "2",
        ],
        vec!["symmetry", "--generator", "nope", "--N", "100", "--h", "2"],
        vec!["sieve", "--function", "d", "--M", "0"],
        vec!["chi-verify", "--qmax", "0", "--h", "1", "--N", "10"],
        vec!["no-such-command"],
    ] {
        let o = symlab(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
    let o = Command::new(env!("CARGO_BIN_EXE_symlab"))
        .args(["sieve", "--function", "d", "--M", "5"])
        .env("SYMLAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let args = ["symmetry", "--function", "Lambda", "--N", "50000", "--h", "30"];
    let one = Command::new(env!("CARGO_BIN_EXE_symlab"))
        .args(args)
        .env("SYMLAB_THREADS", "1")
        .output()
        .unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_symlab"))
        .args(args)
        .env("SYMLAB_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, symlab(&args).stdout);
}

#[test]
fn emitted_grid_rows_parse() {
    // the scan header's first four columns form a valid grid
    let o = symlab(&["scan", "--flagship", "g:delta_one"]);
    assert_eq!(o.status.code(), Some(0));
    let grid: String = stdout(&o)
        .lines()
        .map(|l| l.split(',').take(4).collect::<Vec<_>>().join(",") + "\n")
        .collect();
    let cells = parse_grid(&grid, "derived").unwrap();
    assert_eq!(cells.len(), 6);
    assert_eq!(cells[0].n, 4096);
}
