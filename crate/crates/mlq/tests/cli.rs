//! End-to-end checks of the command-line binary: determinism, file format,
//! round-trip parsing, exit codes, and the thread-cap environment knob.

use std::path::Path;
use std::process::{Command, Output};

use mlq::cli::{read_csv_table, Cell, ParsedTable};
use mlq::relaxation::{e_alpha, RelaxOrder};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_mlq")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .env_remove("MLQ_THREADS")
        .output()
        .expect("failed to spawn the mlq binary")
}

fn run_with_threads(args: &[&str], threads: &str) -> Output {
    Command::new(bin())
        .args(args)
        .env("MLQ_THREADS", threads)
        .output()
        .expect("failed to spawn the mlq binary")
}

fn assert_success(out: &Output, what: &str) {
    assert!(
        out.status.success(),
        "{what} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn col(t: &ParsedTable, name: &str) -> usize {
    t.columns
        .iter()
        .position(|c| c == name)
        .unwrap_or_else(|| panic!("column {name} missing from {:?}", t.columns))
}

fn num(cell: &Cell) -> f64 {
    match cell {
        Cell::Num(v) => *v,
        Cell::Int(i) => *i as f64,
        Cell::Text(s) => panic!("expected a number, found text {s:?}"),
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    // A deterministic analytic table.
    for p in [&a, &b] {
        let out = run(&[
            "poisson",
            "--beta",
            "0.5",
            "--t",
            "1",
            "--kmax",
            "10",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_success(&out, "poisson");
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    // A seeded Monte Carlo table, which also exercises the worker pool.
    let c = dir.path().join("c.csv");
    let d = dir.path().join("d.csv");
    for p in [&c, &d] {
        let out = run(&[
            "ctrw",
            "--beta",
            "0.5",
            "--t",
            "2",
            "--paths",
            "500",
            "--seed",
            "11",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_success(&out, "ctrw simulation");
    }
    let sim = std::fs::read(&c).unwrap();
    assert_eq!(sim, std::fs::read(&d).unwrap());
    // A different seed must actually change the empirical column.
    let e = dir.path().join("e.csv");
    let out = run(&[
        "ctrw", "--beta", "0.5", "--t", "2", "--paths", "500", "--seed", "12", "--out",
        e.to_str().unwrap(),
    ]);
    assert_success(&out, "ctrw simulation with another seed");
    assert_ne!(sim, std::fs::read(&e).unwrap());
}

#[test]
fn poisson_json_matches_the_documented_value() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pmf.json");
    let out = run(&[
        "poisson",
        "--beta",
        "0.5",
        "--t",
        "1",
        "--kmax",
        "10",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_success(&out, "poisson json");
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "poisson");
    assert!(v["seed"].is_null());
    assert_eq!(v["parameters"]["beta"], "0.5");
    assert_eq!(v["columns"][0], "k");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[0][0], 0);
    let p0 = rows[0][1].as_f64().unwrap();
    assert!(
        (p0 - 0.4275836).abs() < 5e-7,
        "probability of zero events at beta=0.5, t=1 should be 0.4275836, got {p0}"
    );
    // The pmf column must be nonincreasing in survival terms: cumulative
    // stays within [0, 1] and increases.
    let mut prev = 0.0;
    for row in rows {
        let c = row[2].as_f64().unwrap();
        assert!(c >= prev && c <= 1.0);
        prev = c;
    }
}

/// Re-render every parsed cell and demand the exact original token, so a
/// write-read-write cycle cannot drift by even one bit.
fn assert_zero_drift(path: &Path) {
    let text = std::fs::read_to_string(path).unwrap();
    let parsed = read_csv_table(path).unwrap();
    let data_lines: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect();
    assert_eq!(data_lines.len(), parsed.rows.len());
    for (line, row) in data_lines.iter().zip(&parsed.rows) {
        let rebuilt: Vec<String> = row.iter().map(Cell::render).collect();
        assert_eq!(
            *line,
            rebuilt.join(","),
            "token drift after one parse-render cycle"
        );
    }
}

#[test]
fn csv_round_trips_through_own_reader_without_drift() {
    let dir = tempfile::tempdir().unwrap();

    // Mixed magnitudes and all three evaluation methods.
    let sweep = dir.path().join("sweep.csv");
    let out = run(&[
        "eval", "--alpha", "0.75", "--beta", "0.75", "--zmin", "-60", "--zmax", "3", "--points",
        "40", "--out",
        sweep.to_str().unwrap(),
    ]);
    assert_success(&out, "eval sweep");
    assert_zero_drift(&sweep);

    // Eight decades of dynamic range on a geometric grid.
    let wide = dir.path().join("wide.csv");
    let out = run(&[
        "figure", "--id", "4", "--points", "60", "--out",
        wide.to_str().unwrap(),
    ]);
    assert_success(&out, "figure 4");
    assert_zero_drift(&wide);
}

#[test]
fn figure_two_matches_direct_library_evaluation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig2.csv");
    let out = run(&[
        "figure", "--id", "2", "--alphas", "0.25,0.5,0.75,0.9,1", "--tmax", "15", "--points",
        "16", "--out",
        path.to_str().unwrap(),
    ]);
    assert_success(&out, "figure 2");
    let table = read_csv_table(&path).unwrap();
    assert_eq!(table.columns[0], "t");
    assert_eq!(table.rows.len(), 16);
    let first_t = num(&table.rows[0][0]);
    let last_t = num(&table.rows[15][0]);
    assert_eq!(first_t, 0.0);
    assert_eq!(last_t, 15.0);
    let j = col(&table, "e_0.5");
    let order = RelaxOrder::new(0.5).unwrap();
    for row in &table.rows {
        let t = num(&row[0]);
        let from_file = num(&row[j]);
        let direct = e_alpha(order, t).unwrap().value;
        assert_eq!(
            from_file.to_bits(),
            direct.to_bits(),
            "file value at t={t} must be bit-identical to the library"
        );
    }
}

#[test]
fn exit_codes_follow_the_error_taxonomy() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("x.csv");
    let out_str = out_path.to_str().unwrap();

    // Usage errors: unknown flag, missing seed for a stochastic run.
    let usage = run(&["poisson", "--beta", "0.5", "--bogus", "--out", out_str]);
    assert_eq!(usage.status.code(), Some(2));
    let line = String::from_utf8_lossy(&usage.stderr);
    assert_eq!(line.trim_end().lines().count(), 1, "stderr must be one line");
    assert!(line.starts_with("mlq-error code=2 kind=usage message="));

    let unseeded = run(&[
        "ctrw", "--beta", "0.5", "--t", "1", "--paths", "10", "--out", out_str,
    ]);
    assert_eq!(unseeded.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unseeded.stderr).contains("--seed"));

    // Domain errors: invalid order, spectrum at the Dirac edge.
    let domain = run(&["eval", "--alpha=-1", "--z", "0.5", "--out", out_str]);
    assert_eq!(domain.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&domain.stderr)
        .starts_with("mlq-error code=3 kind=domain message="));

    let dirac = run(&["spectrum", "--alpha", "1", "--out", out_str]);
    assert_eq!(dirac.status.code(), Some(3));

    // Numeric failure: a convolution cap far too small for the horizon.
    let numeric = run(&[
        "ctrw", "--beta", "0.9", "--t", "50", "--kmax", "3", "--out", out_str,
    ]);
    assert_eq!(numeric.status.code(), Some(4));
    let line = String::from_utf8_lossy(&numeric.stderr);
    assert_eq!(line.trim_end().lines().count(), 1);
    assert!(line.starts_with("mlq-error code=4 kind=truncation-budget message="));

    // No failure may leave an output file behind.
    assert!(!out_path.exists(), "failed runs must not write output");
}

#[test]
fn thread_cap_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.csv");
    let three = dir.path().join("three.csv");
    for (path, threads) in [(&one, "1"), (&three, "3")] {
        let out = run_with_threads(
            &[
                "ctrw",
                "--beta",
                "0.6",
                "--t",
                "3",
                "--paths",
                "600",
                "--seed",
                "5",
                "--out",
                path.to_str().unwrap(),
            ],
            threads,
        );
        assert_success(&out, "ctrw under a thread cap");
    }
    assert_eq!(
        std::fs::read(&one).unwrap(),
        std::fs::read(&three).unwrap(),
        "worker count must never leak into results"
    );

    let bad = run_with_threads(&["poisson", "--beta", "0.5", "--t", "1", "--out", "x.csv"], "0");
    assert_eq!(bad.status.code(), Some(2));
    let bad = run_with_threads(&["poisson", "--beta", "0.5", "--t", "1", "--out", "x.csv"], "abc");
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn every_subcommand_emits_metadata_then_header() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<(&str, Vec<&str>, &str)> = vec![
        ("eval", vec!["--alpha", "0.5", "--z", "1"], "z"),
        ("relax", vec!["--alpha", "0.5", "--points", "8"], "t"),
        ("spectrum", vec!["--alpha", "0.5", "--points", "8"], "r"),
        ("wright", vec!["--nu", "0.5", "--points", "8"], "x"),
        ("green", vec!["--nu", "0.5", "--points", "8"], "x"),
        ("poisson", vec!["--beta", "0.5", "--t", "1", "--kmax", "3"], "k"),
        ("ctrw", vec!["--beta", "0.5", "--t", "1"], "site"),
        ("universality", vec!["--taus", "0.1,0.01"], "tau"),
        ("figure", vec!["--id", "1", "--points", "8"], "r"),
        ("figure", vec!["--id", "5", "--points", "8"], "t"),
        ("figure", vec!["--id", "6", "--points", "9"], "x"),
        ("figure", vec!["--id", "7", "--points", "9"], "x"),
    ];
    for (i, (cmd, extra, first_col)) in cases.iter().enumerate() {
        let path = dir.path().join(format!("t{i}.csv"));
        let mut args = vec![*cmd];
        args.extend(extra.iter().copied());
        args.push("--out");
        args.push(path.to_str().unwrap());
        let out = run(&args);
        assert_success(&out, &format!("{cmd} {extra:?}"));
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        let meta = lines.next().unwrap();
        assert!(
            meta.starts_with(&format!("# command={cmd}")),
            "metadata line {meta:?} must open with the command"
        );
        assert!(meta.contains(" seed="), "metadata must record the seed");
        assert!(meta.contains(" version="), "metadata must record the version");
        let header = lines.next().unwrap();
        assert!(
            header.starts_with(first_col),
            "header {header:?} must start with column {first_col}"
        );
        assert!(lines.next().is_some(), "table must contain data rows");
        assert!(text.ends_with('\n') && !text.contains('\r'));
    }
}

#[test]
fn overwrite_is_clean_and_leaves_no_temp_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let out = run(&[
        "poisson", "--beta", "0.5", "--t", "1", "--kmax", "20", "--out",
        path.to_str().unwrap(),
    ]);
    assert_success(&out, "first write");
    let out = run(&[
        "poisson", "--beta", "0.75", "--t", "2", "--kmax", "3", "--out",
        path.to_str().unwrap(),
    ]);
    assert_success(&out, "second write");
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# command=poisson beta=0.75 t=2 kmax=3"));
    assert_eq!(text.lines().count(), 2 + 4, "second table must fully replace the first");
    let entries: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(entries.len(), 1, "no temporary files may remain: {entries:?}");
}

#[test]
fn simulated_ctrw_frequencies_track_the_analytic_masses() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("walk.csv");
    let out = run(&[
        "ctrw", "--beta", "0.5", "--t", "2", "--paths", "4000", "--seed", "31", "--out",
        path.to_str().unwrap(),
    ]);
    assert_success(&out, "ctrw with simulation");
    let table = read_csv_table(&path).unwrap();
    let jm = col(&table, "mass");
    let je = col(&table, "empirical");
    let n = 4000.0;
    let mut checked = 0;
    for row in &table.rows {
        let mass = num(&row[jm]);
        let emp = num(&row[je]);
        if mass < 1e-3 {
            continue;
        }
        let se = (mass * (1.0 - mass) / n).sqrt();
        assert!(
            (emp - mass).abs() <= 4.0 * se + 1e-12,
            "site {}: empirical {emp} vs mass {mass} (se {se})",
            row[0].render()
        );
        checked += 1;
    }
    assert!(checked >= 5, "need several populated sites, got {checked}");
}
