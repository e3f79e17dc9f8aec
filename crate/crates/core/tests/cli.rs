use qhj::cli::{main_with_args, run, RunDescriptor};
use serde_json::Value;

fn qhj(args: &str) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qhj").chain(args.split_whitespace());
    let code = main_with_args(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &str) -> Value {
    let (code, out, err) = qhj(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn harmonic_spectrum() {
    let v =
        json("spectrum --family harmonic --omega 1 --levels 4 --method qhj,closed --format json");
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 4);
    for l in levels {
        assert!((num(&l["e_qhj"]) - num(&l["e_closed"])).abs() <= 1e-10);
        assert!(l["e_oracle"].is_null());
    }
    assert_eq!(num(&levels[3]["e_closed"]), 3.5);
}

#[test]
fn eckart_verify() {
    let (code, out, _) =
        qhj("verify --family eckart --A 1 --B 4 --alpha 1 --levels 5 --format json");
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 2);
    assert!(levels.iter().all(|l| l["status"] == "ok"));
    assert!(levels.iter().all(|l| !l["e_oracle"].is_null()));
    assert_eq!(v["notices"].as_array().unwrap().len(), 3);
}

#[test]
fn scarf2_residues() {
    let v = json("residues --family scarf2 --A 2 --B 1 --alpha 1 --energy 0 --format json");
    let records = v.as_array().unwrap();
    assert_eq!(records.len(), 4);
    let r2 = 2f64.sqrt();
    let find = |loc: &Value| {
        records
            .iter()
            .find(|r| &r["location"] == loc)
            .unwrap_or_else(|| panic!("{loc}"))
    };
    let g = &find(&serde_json::json!([0.0, 1.0]))["gamma"];
    assert!((num(&g[0]) + 2.0 * r2).abs() < 1e-12 && (num(&g[1]) - r2).abs() < 1e-12);
    let g = &find(&serde_json::json!([0.0, -1.0]))["gamma"];
    assert!((num(&g[0]) + 2.0 * r2).abs() < 1e-12 && (num(&g[1]) + r2).abs() < 1e-12);
    // E = 0: (αI)² = −2m(E − A²) at both ends
    for loc in [serde_json::json!([0.0, 0.0]), serde_json::json!("infinity")] {
        let g = &find(&loc)["gamma"];
        let (re, im) = (num(&g[0]), num(&g[1]));
        assert!(((re * re - im * im) - 8.0).abs() < 1e-10 && (re * im).abs() < 1e-10);
    }
}

#[test]
fn list_covers_every_family() {
    let v = json("list --format json");
    let names: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["family"].as_str().unwrap())
        .collect();
    assert_eq!(names.len(), 9);
    assert!(names.contains(&"eckart") && names.contains(&"square-well"));
}

#[test]
fn exit_codes_and_error_records() {
    let (code, out, err) = qhj("spectrum --family eckart --A 1 --B 0.5 --alpha 1");
    assert_eq!(code, 1);
    assert!(out.is_empty());
    let rec: Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(rec["code"], "invalid_parameters");
    assert!(rec["message"].as_str().unwrap().contains("B > A^2"));
    assert!(rec.get("context").is_some());

    let (code, _, err) = qhj("spectrum --family morse --A 1");
    assert_eq!(code, 1);
    assert!(err.contains("unknown_family"));

    let (code, _, err) = qhj("spectrum --bogus");
    assert_eq!(code, 1);
    assert!(err.contains("usage"));

    let (code, out, _) = qhj("--help");
    assert_eq!(code, 0);
    assert!(out.contains("wkb-compare"));

    // SWKB needs a superpotential; the square well has none
    let (code, out, _) = qhj("wkb-compare --family square-well --L 1 --levels 2");
    assert_eq!(code, 0);
    assert!(out.contains("no superpotential"));

    let (code, _, err) = qhj("verify --family harmonic --omega 1 --tol 0");
    assert_eq!(code, 1);
    assert!(err.contains("\"contract\""));
}

#[test]
fn numerical_failure_exits_two() {
    // valid but unreachable tolerance: the root finder gives up
    let (code, out, err) =
        qhj("verify --family scarf1 --A 3 --B 1 --alpha 1 --levels 2 --tol 1e-30");
    assert_eq!(code, 2);
    assert!(out.is_empty());
    let rec: Value = serde_json::from_str(err.trim()).unwrap();
    assert_eq!(rec["code"], "convergence");
}

#[test]
fn byte_identical_reruns() {
    for args in [
        "verify --family scarf2 --A 2 --B 1 --alpha 1 --levels 3 --format json",
        "spectrum --family rosen-morse1 --A 1.5 --B 0.5 --alpha 1 --levels 4 --method qhj,closed,swkb --format csv",
        "sweep --family harmonic --omega 1 --param omega --from 1 --to 2 --steps 3 --levels 2 --format csv",
    ] {
        let a = qhj(args);
        let b = qhj(args);
        assert_eq!(a.0, 0, "{}", a.2);
        assert_eq!(a.1, b.1);
    }
}

#[test]
fn csv_layout() {
    let (code, out, _) = qhj("spectrum --family harmonic --omega 1 --levels 2 --format csv");
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,e_qhj,e_closed,e_oracle,e_wkb,e_swkb,j_residual"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 7);
    assert_eq!(row[0], "0");
    assert_eq!(row[1].parse::<f64>().unwrap(), 0.5);
    assert!(row[3].is_empty());
    // 15 significant digits
    assert_eq!(row[1].split('e').next().unwrap().replace('.', "").len(), 15);
}

#[test]
fn descriptor_round_trip_and_config_override() {
    let dir = tempfile::tempdir().unwrap();
    let args = "spectrum --family eckart --A 2 --B 9 --alpha 0.5 --levels 3 --format json";
    let (_, direct, _) = qhj(args);

    let d: RunDescriptor = serde_json::from_value(serde_json::json!({
        "command": "spectrum",
        "spec": {"family": "eckart", "params": {"A": 2.0, "B": 9.0, "alpha": 0.5}},
        "levels": 3,
        "format": "json"
    }))
    .unwrap();
    let text = serde_json::to_string(&d).unwrap();
    let back: RunDescriptor = serde_json::from_str(&text).unwrap();
    assert_eq!(back, d);
    assert_eq!(run(&back).unwrap().text, run(&d).unwrap().text);

    let path = dir.path().join("run.json");
    std::fs::write(&path, &text).unwrap();
    let (code, from_file, err) = qhj(&format!("spectrum --config {}", path.display()));
    assert_eq!(code, 0, "{err}");
    assert_eq!(from_file, direct);

    // flags override file values
    let (code, out, _) = qhj(&format!("spectrum --config {} --levels 1", path.display()));
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["levels"].as_array().unwrap().len(), 1);
}

#[test]
fn output_paths() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("levels.csv");
    let (code, out, _) = qhj(&format!(
        "spectrum --family harmonic --omega 1 --levels 2 --format csv --output {}",
        path.display()
    ));
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert!(std::fs::read_to_string(&path)
        .unwrap()
        .starts_with("n,e_qhj"));

    let bad = dir.path().join("missing").join("x.csv");
    let (code, _, err) = qhj(&format!(
        "spectrum --family harmonic --omega 1 --output {}",
        bad.display()
    ));
    assert_eq!(code, 1);
    assert!(serde_json::from_str::<Value>(err.trim()).is_ok());
}

#[test]
fn wkb_compare_rows() {
    let v = json("wkb-compare --family harmonic --omega 1 --levels 3 --format json");
    let rows = v["levels"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for r in rows {
        assert!((num(&r["e_wkb"]) - num(&r["e_closed"])).abs() < 1e-9);
        assert!(num(&r["swkb_defect"]).abs() < 1e-9);
    }
}
