use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sharpckn"))
        .args(args)
        .output()
        .expect("spawn sharpckn")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// Header plus records, as strings.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(str::to_string).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).expect("valid json")
}

#[test]
fn radial_extremal_ratio_is_one() {
    let out = run(&[
        "verify", "ckn-radial", "--n", "3", "--alpha", "0", "--beta", "0", "--gamma", "0.5", "--t", "2", "--profile",
        "u1(0,0)",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (h, rows) = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 1);
    let ratio: f64 = rows[0][column(&h, "value")].parse().unwrap();
    assert!((ratio - 1.0).abs() < 1e-6);
}

#[test]
fn identities_on_gaussian() {
    let out = run(&["verify", "identities", "--n", "3", "--profile", "gauss(1)"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (h, rows) = csv_rows(&stdout(&out));
    let (value, info) = (column(&h, "value"), column(&h, "informational"));
    assert_eq!(rows.len(), 6);
    for row in &rows {
        let v: f64 = row[value].parse().unwrap();
        if row[info] == "true" {
            // the |x|²u² variant is reported, not judged
            assert!(v > 1e-3, "{row:?}");
        } else {
            assert!(v <= 1e-8, "{row:?}");
        }
    }
}

#[test]
fn invalid_parameters_exit_two() {
    let out = run(&["verify", "ckn-radial", "--n", "1", "--alpha", "1", "--profile", "gauss(1)"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("n - 2*alpha > 0"), "{}", stderr(&out));
    assert!(stdout(&out).is_empty());
}

#[test]
fn other_verify_checks() {
    let out = run(&["verify", "ckn-alpha", "--n", "2", "--alpha", "0.5", "--profile", "u0(0.5)", "--profile", "gauss(1)"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (h, rows) = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 2);
    let ratio: f64 = rows[0][column(&h, "value")].parse().unwrap();
    assert!((ratio - 1.0).abs() < 1e-6);

    let out = run(&["verify", "hpw", "--n", "3", "--battery", "stability"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(csv_rows(&stdout(&out)).1.len(), 33);

    let out = run(&[
        "verify", "modal-identities", "--n", "3", "--beta", "-1", "--kmax", "1", "--profile", "gauss(0.5)",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(csv_rows(&stdout(&out)).1.len(), 6);
}

fn summary(text: &str) -> (u32, f64, f64) {
    let (h, rows) = csv_rows(text);
    let last = rows.last().unwrap();
    assert_eq!(last[column(&h, "row")], "summary");
    (
        last[column(&h, "k")].parse().unwrap(),
        last[column(&h, "lower")].parse().unwrap(),
        last[column(&h, "upper")].parse().unwrap(),
    )
}

#[test]
fn sharp_constant_examples() {
    let out = run(&["sharp-constant", "--n", "3", "--alpha", "0", "--beta", "-2", "--gamma", "0"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let (k, lower, upper) = summary(&text);
    assert_eq!(k, 0);
    assert!((lower - 6.25).abs() < 1e-9 && (upper - 6.25).abs() < 1e-6);
    let (h, rows) = csv_rows(&text);
    for row in rows.iter().filter(|r| r[0] == "mode") {
        let lo: f64 = row[column(&h, "lower")].parse().unwrap();
        let up: f64 = row[column(&h, "upper")].parse().unwrap();
        assert!(lo <= up * (1.0 + 1e-12), "{row:?}");
    }

    let out = run(&["sharp-constant", "--n", "5", "--alpha", "0", "--beta", "0", "--gamma", "0.5"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (k, lower, upper) = summary(&stdout(&out));
    assert_eq!(k, 0);
    assert!((lower - 9.0).abs() < 1e-9 && (upper - 9.0).abs() < 1e-6);
}

#[test]
fn sharp_constant_rejects_unbalanced_gamma() {
    let out = run(&["sharp-constant", "--n", "3", "--alpha", "0", "--beta", "0", "--gamma", "0.3"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("balance"));
}

#[test]
fn stability_examples() {
    let out = run(&["stability", "--n", "3", "--battery", "perturbed"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (h, rows) = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 30);
    let (g, l) = (column(&h, "satisfied_grad"), column(&h, "satisfied_l2"));
    assert!(rows.iter().all(|r| r[g] == "true" && r[l] == "true"));

    let out = run(&["stability", "--n", "3", "--profile", "gauss(0.5)"]);
    assert_eq!(code(&out), 0);
    let (h, rows) = csv_rows(&stdout(&out));
    for name in ["delta", "relative_distance_grad", "relative_distance_l2"] {
        let v: f64 = rows[0][column(&h, name)].parse().unwrap();
        assert!(v.abs() <= 1e-9, "{name} = {v}");
    }

    let out = run(&["stability", "--n", "1", "--profile", "bump(2,0.5)", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&stdout(&out));
    let row = &v["rows"][0];
    assert_eq!(row[8], true);
    assert!(row[2].as_f64().unwrap() > 0.0);
}

#[test]
fn hermite_examples() {
    let out = run(&["hermite", "gap", "--n", "1", "--dmax", "0"]);
    assert_eq!(code(&out), 0);
    let (h, rows) = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][column(&h, "gap")].parse::<f64>().unwrap(), 0.5);

    let out = run(&["hermite", "gap", "--n", "1", "--dmax", "2"]);
    let (h, rows) = csv_rows(&stdout(&out));
    let gap: f64 = rows[2][column(&h, "gap")].parse().unwrap();
    assert!((gap - (3.0 - 6f64.sqrt()) / 2.0).abs() < 1e-13);

    // a failed claim is data, not a finding
    let out = run(&["hermite", "gap", "--n", "1", "--dmax", "6"]);
    assert_eq!(code(&out), 0);
    let (h, rows) = csv_rows(&stdout(&out));
    assert_eq!(rows[6][column(&h, "meets_claim")], "false");

    let out = run(&["hermite", "check-products", "--imax", "8"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let (h, rows) = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 2 * 81);
    assert!(rows.iter().all(|r| r[column(&h, "passed")] == "true"));

    let out = run(&["hermite", "poincare", "--n", "2", "--dmax", "3", "--samples", "5", "--seed", "11"]);
    assert_eq!(code(&out), 0);
    assert_eq!(csv_rows(&stdout(&out)).1.len(), 5);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# hydrogen case\nn = 3\ngamma = 0.5\nprofile = u1(0,0)\nprofile = gauss(1)\nformat = json\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let out = run(&["verify", "ckn-radial", "--config", cfg]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v = json(&stdout(&out));
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);

    let out = run(&["verify", "ckn-radial", "--config", cfg, "--profile", "gauss(2)", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let (_, rows) = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], "gauss(2)");

    // an overriding n makes the file's gamma inadmissible
    let out = run(&["verify", "ckn-radial", "--config", cfg, "--n", "1"]);
    assert_eq!(code(&out), 2);

    std::fs::write(dir.path().join("bad.cfg"), "n = 3\nwidth = 2\n").unwrap();
    let out = run(&["verify", "hpw", "--config", dir.path().join("bad.cfg").to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("unknown key 'width'"));
}

fn to_f64(cell: &serde_json::Value) -> Option<f64> {
    cell.as_f64().filter(|_| cell.is_f64())
}

#[test]
fn json_and_csv_carry_identical_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("r.csv");
    let json_path = dir.path().join("r.json");
    let args = ["verify", "identities", "--n", "2", "--alpha", "0.25", "--profile", "bump(1, 0.4)", "--profile", "u1(0,-1)"];
    let mut a = args.to_vec();
    a.extend(["--out", csv_path.to_str().unwrap()]);
    assert_eq!(code(&run(&a)), 0);
    let mut b = args.to_vec();
    b.extend(["--format", "json", "--out", json_path.to_str().unwrap()]);
    assert_eq!(code(&run(&b)), 0);

    let (header, rows) = csv_rows(&std::fs::read_to_string(&csv_path).unwrap());
    let v = json(&std::fs::read_to_string(&json_path).unwrap());
    let cols: Vec<&str> = v["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    assert_eq!(cols, header);
    let jrows = v["rows"].as_array().unwrap();
    assert_eq!(jrows.len(), rows.len());
    let mut floats = 0;
    for (c, j) in rows.iter().zip(jrows) {
        for (cell, jcell) in c.iter().zip(j.as_array().unwrap()) {
            if let Some(x) = to_f64(jcell) {
                assert_eq!(cell.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{cell} vs {jcell}");
                floats += 1;
            }
        }
    }
    assert_eq!(floats, 12 * 4);
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn json_reruns_are_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("a.json");
    let p2 = dir.path().join("b.json");
    for p in [&p1, &p2] {
        let out = run(&[
            "hermite", "poincare", "--n", "3", "--dmax", "2", "--samples", "4", "--seed", "99", "--format", "json",
            "--out", p.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(read(&p1), read(&p2));
    let v = json(&read(&p1));
    assert_eq!(v["seed"], 99);
    // re-serializing the parsed document reproduces every number
    let again: serde_json::Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(again, v);

    let other = dir.path().join("c.json");
    run(&[
        "hermite", "poincare", "--n", "3", "--dmax", "2", "--samples", "4", "--seed", "100", "--format", "json",
        "--out", other.to_str().unwrap(),
    ]);
    assert_ne!(read(&p1), read(&other));
}

#[test]
fn exit_code_matrix() {
    let cases: &[(&[&str], i32)] = &[
        (&["verify", "hpw", "--n", "3", "--profile", "gauss(1)"], 0),
        (&["hermite", "gap", "--n", "2", "--dmax", "5"], 0),
        // an identity cannot be resolved to 1e-20, so the run is a finding
        (&["verify", "identities", "--n", "3", "--profile", "gauss(1)", "--tol", "1e-20"], 1),
        (&["verify", "ckn-alpha", "--n", "3", "--profile", "bump(2,0.5)", "--tol", "-1"], 2),
        (&["verify", "hpw", "--n", "3"], 2),
        (&["verify", "hpw", "--n", "3", "--profile", "gauss(0.5"], 2),
        (&["verify", "hpw", "--n", "3", "--profile", "gauss(1)", "--battery", "nope"], 2),
        (&["verify", "hpw", "--profile", "gauss(1)"], 2),
        (&["verify", "hpw", "--n", "3", "--profile", "gauss(1)", "--rel-tol", "-1"], 2),
        (&["hermite", "gap", "--n", "5"], 2),
        (&["stability", "--n", "0"], 2),
        (&["verify", "no-such-check"], 2),
        (&["verify", "hpw", "--config", "/nonexistent/run.cfg"], 2),
    ];
    for (args, expected) in cases {
        let out = run(args);
        assert_eq!(code(&out), *expected, "{args:?}: {}", stderr(&out));
        if *expected == 2 {
            assert!(!stderr(&out).is_empty());
        }
    }
}
