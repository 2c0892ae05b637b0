use std::process::{Command, Output};

fn spreadlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spreadlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn spread_of_an_edge() {
    let out = spreadlab(&["spread", "A_"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("spread 2.0\n"));

    let json: serde_json::Value = serde_json::from_slice(&spreadlab(&["--json", "spread", "A_"]).stdout).unwrap();
    assert_eq!(json["results"]["spread"], 2.0);
    assert_eq!(json["command"], "spread");
    for key in ["params", "results", "diagnostics", "version"] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn admissibility_csv_marks_eight_eight() {
    let out = spreadlab(&["admissible", "--s-max", "8", "--t-max", "24", "--csv"]);
    assert!(out.status.success());
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let header = reader.headers().unwrap().clone();
    let col = header.iter().position(|h| h == "t=8").unwrap();
    let mut no_cells = Vec::new();
    for record in reader.records() {
        let record = record.unwrap();
        let s: usize = record[0].parse().unwrap();
        for (i, cell) in record.iter().enumerate().skip(1) {
            if cell == "no" {
                no_cells.push((s, header[i].to_string()));
            }
        }
        if s == 8 {
            assert_eq!(&record[col], "no");
        }
    }
    assert_eq!(no_cells, vec![(8, "t=8".to_string())]);
}

#[test]
fn ell0_json_reports_rational() {
    let out = spreadlab(&["ell0", "--s", "2", "--t", "2", "--n", "100", "--json"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let r = &json["results"];
    assert_eq!(r["ell_one"]["num"], "890");
    assert_eq!(r["ell_one"]["den"], "27");
    assert_eq!(r["ell_candidates"], serde_json::json!([33]));
}

#[test]
fn exit_codes() {
    assert_eq!(spreadlab(&["spread", "not graph6"]).status.code(), Some(2));
    assert_eq!(spreadlab(&["--caps", "bogus=3", "spread", "A_"]).status.code(), Some(2));
    assert_eq!(spreadlab(&["ell0", "--s", "8", "--t", "8", "--n", "200"]).status.code(), Some(1));
    assert_eq!(spreadlab(&["search", "--n", "11", "--s", "2", "--t", "2"]).status.code(), Some(1));
    assert_eq!(spreadlab(&["construct", "--s", "1", "--t", "2", "--n", "5"]).status.code(), Some(1));
}

#[test]
fn json_is_deterministic() {
    let args = ["--json", "search", "--n", "6", "--s", "2", "--t", "3"];
    let a = spreadlab(&args);
    let b = spreadlab(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let args = ["--json", "--threads", "1", "converge", "--s", "3", "--t", "4", "--n", "100", "200"];
    assert_eq!(spreadlab(&args).stdout, spreadlab(&args).stdout);
}

#[test]
fn graph_from_stdin() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_spreadlab"))
        .args(["spread", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"Bw\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("spread 3.0"));
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("spreadlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scan.csv");
    let out = spreadlab(&["--csv", "--out", path.to_str().unwrap(), "scan-ell", "--s", "2", "--t", "3", "--n", "20"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let body = std::fs::read_to_string(&path).unwrap();
    assert!(body.starts_with("ell,spread\n"));
    assert_eq!(body.lines().count(), 1 + 20 / 3 + 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn kst_minor_witness_is_verified() {
    // K₅ contains K_{2,3}.
    let out = spreadlab(&["--json", "kst-minor", "D~{", "--s", "2", "--t", "3"]);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["results"]["has_minor"], true);
    assert_eq!(json["results"]["witness_verified"], true);
    // The 5-cycle does not.
    let out = spreadlab(&["--json", "kst-minor", "Dhc", "--s", "2", "--t", "3"]);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["results"]["has_minor"], false);
}

#[test]
fn selfcheck_is_seeded() {
    let a = spreadlab(&["--seed", "7", "--json", "selfcheck", "--count", "10"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, spreadlab(&["--seed", "7", "--json", "selfcheck", "--count", "10"]).stdout);
}
