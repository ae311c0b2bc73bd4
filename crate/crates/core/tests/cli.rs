use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn bmround(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bmround"))
        .args(args)
        .output()
        .expect("run bmround")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
        .unwrap_or_else(|| panic!("missing {key} in {text}"))
}

#[test]
fn rho_square() {
    let o = bmround(&["rho", "--body", &data("square.json")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rho: f64 = field(&out, "rho").parse().unwrap();
    assert!((rho - std::f64::consts::SQRT_2).abs() < 1e-6);
    assert_eq!(field(&out, "certified"), "true");
}

#[test]
fn rho_disk_inline_spec() {
    let o = bmround(&["rho", "--body", r#"{"type":"lp","p":2}"#]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(field(&out, "full_circle"), "true");
    let rho: f64 = field(&out, "rho").parse().unwrap();
    assert!((rho - 1.0).abs() < 1e-9);
}

#[test]
fn input_errors_exit_1() {
    assert_eq!(
        bmround(&["rho", "--body", "/nonexistent/body.json"]).status.code(),
        Some(1)
    );
    let odd = r#"{"type":"polygon","vertices":[[1,0],[0,1],[-1,0]]}"#;
    assert_eq!(bmround(&["rho", "--body", odd]).status.code(), Some(1));
    assert_eq!(bmround(&["rho"]).status.code(), Some(1));
    assert_eq!(bmround(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        bmround(&[
            "uniqueness",
            "--body",
            &data("square.json"),
            "--map",
            "1,0,0,0",
            "--map",
            "1,0,0,1"
        ])
        .status
        .code(),
        Some(1)
    );
}

#[test]
fn area_bounds_batch_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("area.csv");
    let o = bmround(&[
        "area-bounds",
        "--seed",
        "42",
        "--count",
        "25",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "seed_index,rho,ell,area,lower_ok,upper_ok,envelope_ok,K_O_factor,K_I_factor,certified"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 25);
    for (i, row) in rows.iter().enumerate() {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 10);
        assert_eq!(cols[0], i.to_string());
        assert!(cols[4..7].iter().all(|c| *c == "true"));
        assert_eq!(cols[9], "true");
    }
}

#[test]
fn area_bounds_config_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"seed": 9, "count": 8}"#).unwrap();
    let a = bmround(&["area-bounds", "--config", cfg.to_str().unwrap()]);
    let b = bmround(&["area-bounds", "--seed", "9", "--count", "8"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a).lines().count(), 9);
    let c = bmround(&["area-bounds", "--config", cfg.to_str().unwrap(), "--count", "3"]);
    assert_eq!(stdout(&c).lines().count(), 4);
}

#[test]
fn uniqueness_maps() {
    let o = bmround(&[
        "uniqueness",
        "--body",
        &data("square.json"),
        "--map",
        "1,0,0,1",
        "--map",
        "0,-2,2,0",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = bmround(&[
        "uniqueness",
        "--body",
        &data("square.json"),
        "--map",
        "1,0,0,1",
        "--map",
        "2,0,0,1",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn uniqueness_batch() {
    let o = bmround(&["uniqueness", "--seed", "42", "--count", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("index,rho,deviation,status\n"));
    assert_eq!(out.lines().count(), 5);
}

#[test]
fn modulus_linf_axis() {
    let o = bmround(&[
        "modulus",
        "--field",
        &data("linf_field.json"),
        "--family",
        &data("family_left_right.json"),
        "--n",
        "16,32",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "n,mod_field,mod_euclid,ratio");
    for line in lines {
        let ratio: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!((ratio - 4.0 / std::f64::consts::PI).abs() < 0.06);
    }
}

#[test]
fn modulus_mixed_field_reports_field_only() {
    let o = bmround(&[
        "modulus",
        "--field",
        &data("mixed_field.json"),
        "--family",
        &data("family_left_right.json"),
        "--n",
        "8",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let row = out.lines().nth(1).unwrap();
    assert!(row.starts_with("8,") && row.ends_with(",,"));
}

#[test]
fn modulus_solver_limit_exits_4() {
    let o = bmround(&[
        "modulus",
        "--max-iter",
        "2",
        "--field",
        &data("linf_field.json"),
        "--family",
        &data("family_diamond.json"),
        "--n",
        "24",
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).contains("gap"));
}

#[test]
fn svg_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("hex.svg");
    let o = bmround(&["svg", "--body", &data("hexagon.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.contains(r#"version="1.1""#));
    assert!(svg.contains(r#"id="john-ellipse""#));
    assert!(svg.contains("outer-contact"));
}
