use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmdescend"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mmdescend-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn f(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn verify_exit_codes() {
    assert_eq!(code(&run(&["verify", &f("strassen.json")])), 0);
    assert_eq!(code(&run(&["verify", &f("strassen_encoding.json")])), 0);
    let bad = run(&["verify", &f("strassen_corrupted.json")]);
    assert_eq!(code(&bad), 2);
    assert!(stdout(&bad).contains("(1,1,1,1,1,1)"));

    let malformed = scratch("malformed.json");
    std::fs::write(&malformed, "{\"dims\": [2, 2, 2],\n \"triples\": [").unwrap();
    let out = run(&["verify", malformed.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&[])), 1);
    assert_eq!(code(&run(&["frobnicate", &f("strassen.json")])), 1);
    assert_eq!(code(&run(&["verify", "/nonexistent/scheme.json"])), 1);
    assert_eq!(
        code(&run(&["obstruct", &f("strassen.json"), "--variant", "XYZ"])),
        1
    );
}

#[test]
fn info_lines() {
    let out = run(&["info", &f("strassen.json")]);
    assert_eq!(code(&out), 0);
    let first = stdout(&out).lines().next().unwrap().to_string();
    assert_eq!(first, "⟨2,2,2,7⟩, ring ℤ, traces [2, 1, 1, 1, 1, 1, 1]");
    let half = stdout(&run(&["info", &f("strassen_half.json")]));
    assert!(half.contains("ring ℤ[1/2]"));
    let complex = stdout(&run(&["info", &f("strassen_complexified.json")]));
    assert!(complex.contains("ring ℚ[i]"));
    assert_eq!(code(&run(&["info", &f("strassen_corrupted.json")])), 2);
}

#[test]
fn rationalize_outcomes() {
    let out_path = scratch("rational.json");
    let _ = std::fs::remove_file(&out_path);
    let out = run(&[
        "rationalize",
        &f("strassen_complexified.json"),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["status"], "success");
    assert_eq!(code(&run(&["verify", out_path.to_str().unwrap()])), 0);
    let info = stdout(&run(&["info", out_path.to_str().unwrap()]));
    assert!(info.starts_with("⟨2,2,2,7⟩, ring ℤ"));

    let ident = run(&["rationalize", &f("strassen.json")]);
    assert_eq!(code(&ident), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&ident)).unwrap();
    assert_eq!(report["certificate"]["reason"], "already_rational");
    assert_eq!(
        report["transform"]["x"],
        serde_json::json!([["1", "0"], ["0", "1"]])
    );

    let none_path = scratch("none.json");
    let _ = std::fs::remove_file(&none_path);
    let none = run(&[
        "rationalize",
        &f("split_nonreal.json"),
        "--out",
        none_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&none), 3);
    let report: serde_json::Value = serde_json::from_str(&stdout(&none)).unwrap();
    assert_eq!(report["certificate"]["variant"], "OPQ");
    assert!(!none_path.exists());
}

#[test]
fn obstruct_outcomes() {
    let none = run(&["obstruct", &f("strassen.json"), "--depth", "3"]);
    assert_eq!(code(&none), 5);
    let report: serde_json::Value = serde_json::from_str(&stdout(&none)).unwrap();
    assert_eq!(report["products_examined"], 7 + 49 + 343);
    assert!(report["message"]
        .as_str()
        .unwrap()
        .starts_with("no obstruction found up to depth 3"));

    let toy = run(&["obstruct", &f("half_trace_toy.json"), "--skip-verify"]);
    assert_eq!(code(&toy), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&toy)).unwrap();
    assert_eq!(report["witness"], serde_json::json!([1, 2]));
    assert_eq!(report["trace_value"], "1/2");
    // Without the override the toy is rejected as an invalid scheme.
    assert_eq!(code(&run(&["obstruct", &f("half_trace_toy.json")])), 2);

    assert_eq!(
        code(&run(&["obstruct", &f("strassen_complexified.json")])),
        1
    );
}

#[test]
fn memo_cap_env_does_not_change_report() {
    let a = run(&["obstruct", &f("strassen.json"), "--depth", "3"]);
    let b = Command::new(env!("CARGO_BIN_EXE_mmdescend"))
        .args(["obstruct", &f("strassen.json"), "--depth", "3"])
        .env("MMDESCEND_MEMO_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(code(&b), 5);
}

#[test]
fn transform_commands() {
    let same = run(&["transform", &f("strassen.json")]);
    assert_eq!(code(&same), 0);
    assert_eq!(
        same.stdout,
        std::fs::read(fixture("strassen.json")).unwrap()
    );

    let singular = run(&["transform", &f("strassen.json"), "--y", "[[1, 1], [1, 1]]"]);
    assert_eq!(code(&singular), 1);
    assert!(String::from_utf8_lossy(&singular.stderr).contains("Y is singular"));

    let moved = scratch("moved.json");
    let out = run(&[
        "transform",
        &f("strassen.json"),
        "--x",
        "[[1, i], [0, 1]]",
        "--y",
        "[[i, 0], [1, 1]]",
        "--out",
        moved.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        std::fs::read_to_string(&moved).unwrap(),
        std::fs::read_to_string(fixture("strassen_complexified.json")).unwrap()
    );

    let r1 = run(&["transform", &f("strassen.json"), "--random", "--seed", "7"]);
    let r2 = run(&["transform", &f("strassen.json"), "--seed", "7"]);
    assert_eq!(code(&r1), 0);
    assert_eq!(r1.stdout, r2.stdout);
    assert_ne!(r1.stdout, same.stdout);
}

#[test]
fn convert_round_trip_is_byte_identical() {
    let enc = run(&["convert", &f("strassen.json")]);
    assert_eq!(
        enc.stdout,
        std::fs::read(fixture("strassen_encoding.json")).unwrap()
    );
    let back = run(&["convert", &f("strassen_encoding.json")]);
    assert_eq!(
        back.stdout,
        std::fs::read(fixture("strassen.json")).unwrap()
    );
}

#[test]
fn repeated_runs_are_identical() {
    for args in [
        vec!["rationalize", "strassen_complexified.json"],
        vec!["rationalize", "split_nonreal.json"],
        vec!["info", "split_nonreal.json"],
    ] {
        let path = f(args[1]);
        let a = run(&[args[0], &path]);
        let b = run(&[args[0], &path]);
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(code(&a), code(&b));
    }
}

#[test]
fn bundled_fixture_files_match_library() {
    use mmdescend::fixtures;
    let pairs = [
        ("strassen.json", fixtures::strassen().to_json()),
        (
            "strassen_encoding.json",
            fixtures::strassen().to_encoding_json(),
        ),
        ("standard_222.json", fixtures::standard_222().to_json()),
        (
            "strassen_complexified.json",
            fixtures::complexified_strassen().to_json(),
        ),
        ("split_nonreal.json", fixtures::split_nonreal().to_json()),
        ("half_trace_toy.json", fixtures::half_trace_toy().to_json()),
    ];
    for (name, text) in pairs {
        assert_eq!(
            std::fs::read_to_string(fixture(name)).unwrap(),
            text,
            "{name}"
        );
    }
}
