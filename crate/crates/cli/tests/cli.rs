use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tetrakit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("tetrakit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["volume", "--reversible", "3,4,4,3"]), 0);
    assert_eq!(code(&["classify"]), 1);
    assert_eq!(code(&["volume", "--reversible", "1,2,3"]), 1);
    assert_eq!(
        code(&[
            "volume",
            "--edges",
            "1,1,1,1,1,1",
            "--reversible",
            "1,1,1,1"
        ]),
        1
    );
    assert_eq!(code(&["sweep", "no-such-sweep"]), 1);
    assert_eq!(
        code(&["classify", "--vertices", "0,0,0,1,0,0,0,1,0,1,1,0"]),
        2
    );
    assert_eq!(code(&["classify", "--reversible", "1,1.9,1,1"]), 3);
    assert_eq!(code(&["volume", "--reversible", "1,1.9,1,1"]), 3);

    let open = temp_file(
        "open.json",
        r#"{"facets": [{"normal": [1,0,0], "area": 1}, {"normal": [0,1,0], "area": 1},
                       {"normal": [0,0,1], "area": 1}, {"normal": [-1,0,0], "area": 1}]}"#,
    );
    assert_eq!(
        code(&["reconstruct", "--facets", open.to_str().unwrap()]),
        4
    );

    let coplanar = temp_file(
        "coplanar.json",
        r#"{"facets": [{"normal": [1,0,0], "area": 1}, {"normal": [0,1,0], "area": 1},
                       {"normal": [-1,0,0], "area": 1}, {"normal": [0,-1,0], "area": 1}]}"#,
    );
    assert_eq!(
        code(&["reconstruct", "--facets", coplanar.to_str().unwrap()]),
        5
    );
}

#[test]
fn flat_reversible_volume_reports_zero() {
    // unit square: on the manifold 2a² + 2b² = c² + d²
    let s = 2f64.sqrt().to_string();
    let v = json(&["volume", "--reversible", &format!("1,1,{s},{s}"), "--json"]);
    for m in v["methods"].as_array().unwrap() {
        assert!(m["volume_sq"].as_f64().unwrap().abs() < 1e-14, "{m}");
    }
    let kind = &v["closed_form"]["realizability"]["degeneracy_kind"];
    assert!(kind == "Parallelogram" || kind == "Both", "{kind}");
    assert_eq!(
        code(&["classify", "--reversible", &format!("1,1,{s},{s}")]),
        2
    );
}

#[test]
fn build_then_classify_round_trips() {
    let built = run(&["build", "--reversible", "3,4,4,3", "--json"]);
    assert!(built.status.success());
    let path = temp_file("built.json", &String::from_utf8(built.stdout).unwrap());
    let c = json(&["classify", "--input", path.to_str().unwrap(), "--json"]);
    assert_eq!(c["verdict"], "Reversible");
    assert_eq!(
        c["passing_pairings"],
        serde_json::json!(["(f0,f1),(f2,f3)"])
    );
    let v = json(&["volume", "--input", path.to_str().unwrap(), "--json"]);
    let vol = v["methods"][0]["volume"].as_f64().unwrap();
    assert!((vol * vol - 1187.5 / 72.0).abs() < 1e-12);
}

#[test]
fn reconstruct_output_feeds_back() {
    let facets = temp_file("regular.json", &{
        let s = 1.0 / 3f64.sqrt();
        format!(
            r#"{{"facets": [{{"normal": [{s},{s},{s}], "area": 1}}, {{"normal": [{s},-{s},-{s}], "area": 1}},
                               {{"normal": [-{s},{s},-{s}], "area": 1}}, {{"normal": [-{s},-{s},{s}], "area": 1}}]}}"#
        )
    });
    let r = run(&[
        "reconstruct",
        "--facets",
        facets.to_str().unwrap(),
        "--json",
    ]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let path = temp_file("reconstructed.json", &String::from_utf8(r.stdout).unwrap());
    let c = json(&["classify", "--input", path.to_str().unwrap(), "--json"]);
    assert_eq!(c["verdict"], "Regular");
}

#[test]
fn sweep_json_is_deterministic_across_schedules() {
    let args = ["sweep", "theorem2", "-n", "300", "--seed", "3", "--json"];
    let a = run(&args);
    let b = run(&args);
    let c = run(&[&args[..], &["--sequential"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn tol_multiplier_can_fail_a_sweep() {
    assert_eq!(
        code(&["sweep", "volume-formula", "-n", "200", "--tol", "1e-12"]),
        6
    );
}
