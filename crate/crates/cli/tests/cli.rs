use std::process::{Command, Output};

use serde_json::Value;

const S83: &str = "x3*x0+x0*x2+x2*x1+x1*x4+x4*x0";
const S8A: &str = "x0*x1+x0*x3+x0*x5+x1*x2+x1*x4+x2*x3+x2*x5+x3*x4+x4*x5";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entangle-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).unwrap()
}

fn temp(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("entangle-lab-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn line_graph_converts_to_4_2_2() {
    let text = ok(&["convert", "--to", "code", "x0*x1+x1*x2+x2*x3"]);
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("n="))
        .collect();
    assert_eq!(rows, ["1100", "0111"]);
    assert!(text.contains("n=4"));
}

#[test]
fn code_to_vector_322() {
    let text = ok(&["convert", "--from", "code", "--to", "vector", "110,101"]);
    assert_eq!(text, "n=3\n+00+0++0\n");
}

#[test]
fn round_trip_anf_code_anf() {
    for anf in [
        "x0*x1+x1*x2+x2*x3",
        S83,
        S8A,
        "x0*x5+x1*x5+x2*x4+x3*x4",
        "x0*x1+x2*x3",
    ] {
        for side in ["c", "c-perp"] {
            let code = temp(
                &format!("rt-{side}-{}.txt", anf.len()),
                &ok(&["convert", "--to", "code", "--side", side, anf]),
            );
            let back = ok(&["convert", "--from", "code", "--to", "anf", &code]);
            let want = ok(&["convert", "--to", "vector", anf]);
            let got = ok(&["convert", "--to", "vector", back.trim()]);
            assert_eq!(got, want, "{anf} via side {side} gave {back}");
        }
    }
}

#[test]
fn exit_codes() {
    let out = run(&["convert", "--to", "code", "x0*x1+x1*x2+x0*x2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a bipartite"));
    assert_eq!(run(&["analyze", "x0*+x1"]).status.code(), Some(2));
    assert_eq!(
        run(&["convert", "--from", "code", "--to", "anf", "1x0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["analyze", "--from", "code", "110,011,101"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn analyze_523() {
    let r = json(&["analyze", S83]);
    assert_eq!(r["schema"], "1");
    assert_eq!(r["parl"]["par_l"], "8");
    assert_eq!(r["parl"]["le"], "2");
    assert_eq!(r["parl"]["witness"]["gates"], "IIHHH");
    assert_eq!(r["se"]["beta"], serde_json::json!([0, 3, 5]));
    assert_eq!(r["hierarchy"]["d"], serde_json::json!([0, 3, 5]));
    assert_eq!(r["code"]["d"], 3);
    assert_eq!(r["multispectra"]["max"]["value"], "8");
    assert_eq!(r["state"]["entanglement_order"], 5);
}

#[test]
fn analyze_six_qubit() {
    let r = json(&["analyze", "--parl", "--se", "--crypto", S8A]);
    assert_eq!(r["parl"]["par_l"], "16");
    assert_eq!(r["crypto"]["nonlinear_order"], "2");
    assert_eq!(r["se"]["beta"], serde_json::json!([0, 3, 6]));
    assert!(r.get("multispectra").is_none());
}

#[test]
fn analyze_product_vector() {
    let path = temp("product.txt", "n=3\n+0000000\n");
    let r = json(&["analyze", "--from", "vector", &path]);
    let par_l = r["parl"]["par_l"]["float"].as_f64().unwrap();
    let le = r["parl"]["le"]["float"].as_f64().unwrap();
    assert!(
        (par_l - 8.0).abs() < 1e-6 && le.abs() < 1e-6,
        "{par_l} {le}"
    );
    assert_eq!(r["state"]["entanglement_order"], 0);
    assert!(r["se"]["skipped"].is_string());
    assert!(r["crypto"]["skipped"].is_string());
}

#[test]
fn bipolar_vector_is_recognised() {
    let vec = ok(&["convert", "--to", "vector", S83]);
    let path = temp("s83.txt", &vec);
    let r = json(&["analyze", "--from", "vector", "--parl", "--se", &path]);
    assert_eq!(r["parl"]["par_l"], "8");
    assert_eq!(r["se"]["beta"], serde_json::json!([0, 3, 5]));
}

#[test]
fn code_input_uses_its_graph() {
    let r = json(&[
        "analyze",
        "--from",
        "code",
        "--parl",
        "--hierarchy",
        "--se",
        "11010,01101",
    ]);
    assert_eq!(r["parl"]["par_l"], "8");
    assert_eq!(r["parl"]["relative_to"], "graph");
    assert_eq!(r["hierarchy"]["d"], serde_json::json!([0, 3, 5]));
    assert_eq!(r["se"]["beta"], serde_json::json!([0, 3, 5]));
    assert_eq!(r["state"]["par"], "8");
}

#[test]
fn skipped_sections_carry_reasons() {
    let r = json(&[
        "analyze",
        "--parl",
        "--se",
        "--hierarchy",
        "x0*x1+x1*x2+x0*x2+x2*x3+x3*x4+x4*x5+x5*x6",
    ]);
    for key in ["parl", "se", "hierarchy"] {
        assert!(
            r[key]["skipped"].as_str().is_some_and(|s| !s.is_empty()),
            "{key}: {}",
            r[key]
        );
    }
    let r = json(&["analyze", "--parl", "x0*x1+x1*x2+x0*x2"]);
    assert_eq!(r["parl"]["method"], "optimizer");
}

#[test]
fn reports_are_deterministic() {
    let a = ok(&["analyze", S83]);
    let b = ok(&["analyze", "--threads", "1", S83]);
    assert_eq!(a, b);
    let out = Command::new(env!("CARGO_BIN_EXE_entangle-lab"))
        .args(["analyze", S83])
        .env("ENTANGLE_LAB_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), a);
}

#[test]
fn out_file_and_float_mode() {
    let path = temp("report.json", "");
    ok(&["analyze", "--float", "--multispectra", "--out", &path, S83]);
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["arithmetic"], "float");
    let max = r["multispectra"]["max"]["value"]["float"].as_f64().unwrap();
    assert!((max - 8.0).abs() < 1e-9);
}

fn trajectory(args: &[&str]) -> Value {
    let mut full = vec!["trajectory", "--json"];
    full.extend_from_slice(args);
    json(&full)
}

fn column(t: &Value, key: &str) -> Vec<Value> {
    t["steps"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s[key].clone())
        .collect()
}

#[test]
fn trajectories_523() {
    let t = trajectory(&["--search", S83]);
    assert_eq!(t["basis"], "IIHHH");
    let par: Vec<String> = column(&t, "par")
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    assert_eq!(par, ["4", "2", "4", "2", "4", "8"]);
    assert_eq!(column(&t, "m_q"), [2, 1, 1, 0, 0, 0].map(Value::from));

    let t = trajectory(&["--order", "1,2", S83]);
    let par: Vec<String> = column(&t, "par")
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    assert_eq!(par, ["4", "2", "1", "2", "4", "8"]);
    assert_eq!(column(&t, "m_q"), [2, 1, 0, 0, 0, 0].map(Value::from));

    let t = trajectory(&["--from", "code", "--order", "1,2", "11010,01101"]);
    assert_eq!(t["basis"], "IIIII");
    assert_eq!(column(&t, "m_q"), [2, 1, 0, 0, 0, 0].map(Value::from));
}

#[test]
fn trajectory_table_layout() {
    let text = ok(&["trajectory", S83]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "basis IIHHH");
    assert!(lines[1].starts_with('Q') && lines[1].contains("PAR") && lines[1].contains("m_Q"));
    assert!(lines[2].contains("HHHHH") && lines[2].contains("start"));
    assert_eq!(lines.last().unwrap(), &"beta 0 3 5");
}

#[test]
fn ghz_needs_one_measurement() {
    let t = trajectory(&["--search", "x0*x1+x0*x2"]);
    let actions: Vec<String> = column(&t, "action")
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    assert_eq!(actions, ["start", "measure", "free", "free"]);
    assert_eq!(t["beta"], serde_json::json!([0, 3]));
}

#[test]
fn trajectory_errors() {
    assert_eq!(
        run(&["trajectory", "--order", "1,1", S83]).status.code(),
        Some(3)
    );
    assert_eq!(
        run(&["trajectory", "--basis", "HHH", S83]).status.code(),
        Some(3)
    );
    assert_eq!(
        run(&["trajectory", "--order", "1", "--outcomes", "0,1", S83])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&["trajectory", "x0*x1+x1*x2+x0*x2"]).status.code(),
        Some(3)
    );
}

#[test]
fn selftest_passes() {
    let text = ok(&["selftest", "--seed", "7", "--rounds", "10"]);
    assert!(text.contains("selftest passed (seed 7)"));
    assert_eq!(text.lines().count(), 4);
}
