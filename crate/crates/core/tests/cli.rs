use std::process::{Command, Output};

use noneuclid::report::to_json;

fn noneuclid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_noneuclid"))
        .args(args)
        .env_remove("NONEUCLID_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn verify_passes_and_reports_every_geometry() {
    let o = noneuclid(&[
        "verify",
        "--geometry",
        "all",
        "--samples",
        "5000",
        "--seed",
        "7",
        "--tol",
        "1e-8",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
    for g in ["euclidean", "spherical", "hyperbolic"] {
        assert_eq!(v["summaries"][g]["count"], 5000);
    }
    assert!(
        v["summaries"]["hyperbolic"]["min_discriminant"]
            .as_f64()
            .unwrap()
            > 0.0
    );
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn report_round_trips_byte_for_byte() {
    let o = noneuclid(&["verify", "--geometry", "hyperbolic", "--samples", "500"]);
    let text = stdout(&o);
    assert!(text.ends_with('\n'));
    assert_eq!(to_json(&json(&o)).unwrap(), text);
}

#[test]
fn tight_tolerance_fails_with_dumps() {
    let o = noneuclid(&[
        "verify",
        "--geometry",
        "hyperbolic",
        "--samples",
        "500",
        "--tol",
        "1e-20",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["passed"], false);
    let failures = v["failures"].as_array().unwrap();
    assert!(!failures.is_empty() && failures.len() <= 100);
    assert_eq!(failures[0]["vertices"].as_array().unwrap().len(), 3);
    assert!(v["failure_count"].as_u64().unwrap() >= failures.len() as u64);
}

#[test]
fn great_circle_family_passes_on_the_branch() {
    let o = noneuclid(&[
        "verify",
        "--geometry",
        "spherical",
        "--family",
        "great_circle",
        "--samples",
        "1000",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = &json(&o)["summaries"]["spherical"];
    assert_eq!(s["right_angle_branch_count"], 1000);
    assert!(s["thm4_max_abs_residual"].as_f64().unwrap() < 1e-6);
}

#[test]
fn invalid_flags_exit_2() {
    for args in [
        &["verify", "--samples", "0"][..],
        &["verify", "--geometry", "moon"],
        &["verify", "--family", "uniform", "--tol", "-1"],
        &[
            "verify",
            "--geometry",
            "euclidean",
            "--family",
            "great_circle",
        ],
        &[
            "sweep",
            "--family",
            "equilateral",
            "--geometry",
            "spherical",
            "--range",
            "1:0.5:10",
        ],
        &[
            "sweep",
            "--family",
            "equilateral",
            "--geometry",
            "spherical",
            "--range",
            "0.1:0.5:1",
        ],
        &["bogus"],
    ] {
        assert_eq!(noneuclid(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn seed_environment_variable_overrides_the_flag() {
    let run = |env: Option<&str>, seed: &str| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_noneuclid"));
        cmd.args([
            "verify",
            "--geometry",
            "euclidean",
            "--samples",
            "50",
            "--seed",
            seed,
        ]);
        match env {
            Some(v) => cmd.env("NONEUCLID_SEED", v),
            None => cmd.env_remove("NONEUCLID_SEED"),
        };
        cmd.output().unwrap().stdout
    };
    assert_eq!(run(Some("9"), "1"), run(None, "9"));
    assert_ne!(run(None, "1"), run(None, "9"));
}

#[test]
fn right_triangle_report() {
    let o = noneuclid(&["triangle", "--geometry", "euclidean", "0,0", "4,0", "0,3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let close = |x: &serde_json::Value, y: f64| (x.as_f64().unwrap() - y).abs() < 1e-12;
    assert!(close(&v["circumradius"], 2.5));
    assert!(close(&v["inradius"], 1.0));
    assert!(close(&v["center_distance"], 1.25f64.sqrt()));
    assert!(close(&v["identities"]["inequality_slack"]["value"], 0.5));
}

#[test]
fn spherical_equilateral_from_latitude_and_longitude() {
    let o = noneuclid(&[
        "triangle",
        "--geometry",
        "spherical",
        "--input",
        "latlon",
        "40,10",
        "40,130",
        "40,-110",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!(v["center_distance"].as_f64().unwrap() < 1e-10);
    assert!(
        v["identities"]["inequality_slack"]["value"]
            .as_f64()
            .unwrap()
            .abs()
            < 1e-10
    );
}

#[test]
fn hyperbolic_input_models_agree() {
    let disk = noneuclid(&[
        "triangle",
        "--geometry",
        "hyperbolic",
        "--input",
        "disk",
        "0.3,0",
        "-0.1,0.4",
        "-0.2,-0.3",
    ]);
    assert_eq!(disk.status.code(), Some(0));
    let v = json(&disk);
    let verts: Vec<String> = v["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| {
            let c: Vec<String> = p
                .as_array()
                .unwrap()
                .iter()
                .map(|x| format!("{:e}", x.as_f64().unwrap()))
                .collect();
            c.join(",")
        })
        .collect();
    let mut args = vec![
        "triangle",
        "--geometry",
        "hyperbolic",
        "--input",
        "hyperboloid",
    ];
    args.extend(verts.iter().map(String::as_str));
    let raw = noneuclid(&args);
    let w = json(&raw);
    let diff = (v["circumradius"].as_f64().unwrap() - w["circumradius"].as_f64().unwrap()).abs();
    assert!(diff < 1e-12);
}

#[test]
fn bad_vertices_exit_2() {
    for args in [
        &["triangle", "--geometry", "euclidean", "0,0", "0,0", "0,3"][..],
        &["triangle", "--geometry", "euclidean", "0,0", "1,1", "2,2"],
        &["triangle", "--geometry", "euclidean", "0,0", "1,x", "2,2"],
        &[
            "triangle",
            "--geometry",
            "spherical",
            "1,0,0",
            "0,2,0",
            "0,0,1",
        ],
        &[
            "triangle",
            "--geometry",
            "hyperbolic",
            "--input",
            "disk",
            "0,0",
            "1.5,0",
            "0,0.5",
        ],
        &["triangle", "--geometry", "euclidean", "0,0", "1,0"],
    ] {
        let o = noneuclid(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn hypercycle_vertices_exit_4() {
    // Three points on the hypercycle at distance 1 from the v₂ = 0 geodesic.
    let pts: Vec<String> = [-2.0f64, 0.0, 2.0]
        .iter()
        .map(|&s| {
            let (c, h) = (1f64.cosh(), 1f64.sinh());
            format!("{:e},{:e},{:e}", c * s.cosh(), c * s.sinh(), h)
        })
        .collect();
    let mut args = vec!["triangle", "--geometry", "hyperbolic"];
    args.extend(pts.iter().map(String::as_str));
    let o = noneuclid(&args);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("hypercycle"));
}

#[test]
fn sweep_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flat.csv");
    let p = path.to_str().unwrap();
    let args = [
        "sweep",
        "--family",
        "flat_scaled",
        "--geometry",
        "hyperbolic",
        "--range",
        "1e-3:1:50",
        "--spacing",
        "log",
        "--output",
        p,
    ];
    assert_eq!(noneuclid(&args).status.code(), Some(0));
    let first = std::fs::read_to_string(&path).unwrap();
    assert_eq!(noneuclid(&args).status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), first);

    let mut reader = csv::Reader::from_reader(first.as_bytes());
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        [
            "parameter",
            "R",
            "r",
            "d",
            "predicted_d",
            "thm2_residual",
            "inequality_slack",
            "discriminant"
        ]
    );
    let rows: Vec<Vec<f64>> = reader
        .records()
        .map(|r| r.unwrap().iter().map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 50);
    // Relative gap to the Euclidean closed form shrinks with the scale.
    let gap = |row: &Vec<f64>| {
        let flat = (row[1] * (row[1] - 2.0 * row[2])).sqrt();
        (row[3] - flat).abs() / row[3]
    };
    assert!(gap(&rows[0]) < 1e-5);
    assert!(gap(&rows[0]) < gap(&rows[49]));
}

#[test]
fn sweep_blank_columns_and_branch() {
    let e = noneuclid(&[
        "sweep",
        "--family",
        "equilateral",
        "--geometry",
        "euclidean",
        "--range",
        "0.5:2:5",
    ]);
    let text = stdout(&e);
    let cols: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!((cols[5], cols[7]), ("", ""));

    let s = noneuclid(&[
        "sweep",
        "--family",
        "equilateral",
        "--geometry",
        "spherical",
        "--range",
        "0.1:1.5:8",
    ]);
    for line in stdout(&s).lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert!(cols[3].parse::<f64>().unwrap() < 1e-10);
        assert!(cols[6].parse::<f64>().unwrap().abs() < 1e-9);
    }

    let g = noneuclid(&[
        "sweep",
        "--family",
        "great_circle",
        "--geometry",
        "spherical",
        "--range",
        "0:1:6",
    ]);
    assert_eq!(g.status.code(), Some(0));
    for line in stdout(&g).lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[4].parse::<f64>().unwrap(), 0.0);
        assert_eq!(cols[6], "inf");
    }
}

#[test]
fn unwritable_paths_exit_5() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("missing").join("out.csv");
    let bad = bad.to_str().unwrap();
    let s = noneuclid(&[
        "sweep",
        "--family",
        "needle",
        "--geometry",
        "euclidean",
        "--range",
        "0.1:1:3",
        "--output",
        bad,
    ]);
    assert_eq!(s.status.code(), Some(5));
    let v = noneuclid(&["verify", "--samples", "10", "--output", bad]);
    assert_eq!(v.status.code(), Some(5));
}

#[test]
fn text_format() {
    let o = noneuclid(&[
        "verify",
        "--geometry",
        "spherical",
        "--samples",
        "100",
        "--format",
        "text",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS: 0 failed checks"));
}
