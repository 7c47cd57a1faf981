use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_slidearea"))
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn slidearea")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn concentric_four_has_eight_points() {
    let s = scenario("concentric4.json");
    let out = run(&["find-critical", s.to_str().unwrap(), "--gauge", "fix-first"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["critical_points"].as_array().unwrap().len(), 8);
    let h = &v["meta"]["index_histogram"];
    assert_eq!([&h["0"], &h["1"], &h["2"], &h["3"]], [1, 3, 3, 1]);
    for p in v["critical_points"].as_array().unwrap() {
        assert!(p["grad_norm"].as_f64().unwrap() <= 1e-10);
        assert_eq!(p["nullity"], 0);
    }
}

#[test]
fn output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario("concentric3.json");
    let mut files = Vec::new();
    for k in 0..2 {
        let (j, g) = (dir.path().join(format!("r{k}.json")), dir.path().join(format!("r{k}.svg")));
        let out = run(&["find-critical", s.to_str().unwrap(), "--json", j.to_str().unwrap(), "--svg", g.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        let text = std::fs::read(&j).unwrap();
        assert_eq!(text, out.stdout);
        files.push((text, std::fs::read(&g).unwrap()));
    }
    assert_eq!(files[0], files[1]);
    let svg = String::from_utf8(files[0].1.clone()).unwrap();
    assert!(svg.starts_with("<?xml") && svg.contains("<polygon"));
}

#[test]
fn report_keys_in_schema_order() {
    let s = scenario("three_lines.json");
    let out = run(&["find-critical", s.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    let pos: Vec<usize> = ["\"t\"", "\"area\"", "\"grad_norm\"", "\"index\"", "\"nullity\"", "\"flags\"", "\"meta\""]
        .iter()
        .map(|k| text.find(k).unwrap())
        .collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn numbers_have_at_most_twelve_significant_digits() {
    let s = scenario("concentric4.json");
    let out = run(&["find-critical", s.to_str().unwrap(), "--gauge", "fix-first"]);
    fn walk(v: &serde_json::Value) {
        match v {
            serde_json::Value::Number(n) => {
                let s = n.to_string();
                let mantissa = s.split(['e', 'E']).next().unwrap();
                let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
                assert!(digits.trim_start_matches('0').len() <= 12, "{s}");
            }
            serde_json::Value::Array(a) => a.iter().for_each(walk),
            serde_json::Value::Object(o) => o.values().for_each(walk),
            _ => {}
        }
    }
    walk(&json(&out));
}

#[test]
fn special_three_lines() {
    let out = run(&["special", "three-lines"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["critical_count"], 1);
    assert_eq!(v["index"], 2);
}

#[test]
fn special_cases_pass() {
    for case in ["three-circles", "four-circles", "concentric-3", "concentric-4", "circle-star", "midpoint"] {
        let out = run(&["special", case]);
        assert_eq!(out.status.code(), Some(0), "{case}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn pentagon_orbit_closes() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("orbit.csv");
    let svg = dir.path().join("orbit.svg");
    let s = scenario("circle.json");
    let out = run(&[
        "billiard",
        s.to_str().unwrap(),
        "--map",
        "inner-area",
        "--start",
        "0,1.2566",
        "--steps",
        "5",
        "--csv",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["closed"], true);
    assert_eq!(v["period"], 5);
    assert!(v["closure_residual"].as_f64().unwrap() < 1e-8);
    let rows = std::fs::read_to_string(&csv).unwrap();
    let mut lines = rows.lines();
    assert_eq!(lines.next(), Some("step,t,x,y"));
    for line in lines {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((f[2].hypot(f[3]) - 1.0).abs() < 1e-10);
    }
    assert!(std::fs::read_to_string(&svg).unwrap().contains("</svg>"));
}

#[test]
fn outer_orbit_on_ellipse() {
    let s = scenario("ellipse.json");
    let out = run(&["billiard", s.to_str().unwrap(), "--map", "outer-area", "--start", "2,1", "--steps", "4", "--side", "right"]);
    let v = json(&out);
    assert_eq!(v["period"], 4);
    assert_eq!(v["winding"], 1);
}

#[test]
fn closed_orbits_are_critical() {
    let s = scenario("ellipse.json");
    let out = run(&["closed-orbits", s.to_str().unwrap(), "--map", "inner-area", "--period", "5", "--winding", "2", "--grid", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let orbits = v["orbits"].as_array().unwrap();
    assert!(!orbits.is_empty());
    assert!(orbits.iter().all(|o| o["critical"] == true));
}

#[test]
fn check_square_corners() {
    let s = scenario("square.json");
    let out = run(&["check", s.to_str().unwrap(), "--config", "0,1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["critical"], true);
    assert_eq!(v["smooth"], false);
}

#[test]
fn deform_operations_pass() {
    let s = scenario("birth.json");
    let s = s.to_str().unwrap();
    for args in [
        vec!["--op", "grow-tangent", "--at", "2", "--radius", "0.001"],
        vec!["--op", "grow-tangent", "--at", "2", "--radius", "-0.001"],
        vec!["--op", "grow-centered", "--at", "2"],
        vec!["--op", "zigzag", "--at", "1"],
    ] {
        let mut full = vec!["deform", s];
        full.extend(&args);
        let out = run(&full);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(json(&out)["pass"], true);
    }
}

#[test]
fn tangent_birth_raises_index_by_side() {
    let s = scenario("birth.json");
    let s = s.to_str().unwrap();
    let index = |r: &str| {
        let v = json(&run(&["deform", s, "--op", "grow-tangent", "--at", "2", "--radius", r]));
        (v["before"][0]["index"].as_u64().unwrap(), v["after"][0]["index"].as_u64().unwrap())
    };
    let (mu, up) = index("0.001");
    let (_, same) = index("-0.001");
    assert_eq!((up, same), (mu + 1, mu));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["find-critical"]).status.code(), Some(1));
    assert_eq!(run(&["find-critical", "/nonexistent/file.json"]).status.code(), Some(1));
    let s = scenario("circle.json");
    let out = run(&["billiard", s.to_str().unwrap(), "--map", "inner-area", "--start", "0", "--steps", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    let out = run(&["check", scenario("square.json").to_str().unwrap(), "--config", "0,1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_scenario_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    std::fs::write(&f, r#"{"curves":[{"kind":"circle","center":[0,0],"radius":-1}]}"#).unwrap();
    let out = run(&["find-critical", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    std::fs::write(&f, r#"{"curves":[{"kind":"spiral"}]}"#).unwrap();
    assert_eq!(run(&["find-critical", f.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn non_critical_start_is_input_error() {
    let s = scenario("three_lines.json");
    let out = run(&["deform", s.to_str().unwrap(), "--op", "zigzag", "--config", "0.1,0.2,0.3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verification_failure_exits_two() {
    // without the gauge the rotation family of concentric circles is degenerate,
    // and a zero translation cannot remove it
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("rings.json");
    std::fs::write(
        &f,
        r#"{"curves":[{"kind":"circle","center":[0,0],"radius":1},{"kind":"circle","center":[0,0],"radius":2},{"kind":"circle","center":[0,0],"radius":3}],"settings":{"starts":64}}"#,
    )
    .unwrap();
    let out = run(&["deform", f.to_str().unwrap(), "--op", "morsify", "--rho", "0"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["pass"], false);
    let out = run(&["deform", f.to_str().unwrap(), "--op", "morsify", "--rho", "0.3", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}
