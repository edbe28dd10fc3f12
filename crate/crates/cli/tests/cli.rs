use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monointerp")).args(args).output().expect("spawn")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn expdigits_check_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&run(&["gen", "expdigits", "--m", "0", "--out-dir", s(d)])), 0);
    let raised = fs::read_to_string(d.join("expdigits_m0_raised.json")).unwrap();
    assert!(raised.contains("\"2\",\n      \"3\""));

    let lower = d.join("expdigits_m0.json");
    let o = run(&["check", s(&lower)]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("noninterpolable"));
    let verdict = d.join("expdigits_m0.verdict.json");
    assert!(fs::read_to_string(&verdict).unwrap().contains("\"a\""));
    assert_eq!(code(&run(&["verify", s(&lower), s(&verdict)])), 0);

    let up = d.join("expdigits_m0_raised.json");
    let out = d.join("cert.json");
    assert_eq!(code(&run(&["check", s(&up), "-o", s(&out)])), 0);
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("\"interpolable\""));
    assert_eq!(code(&run(&["verify", s(&up), s(&out)])), 0);
    assert_eq!(code(&run(&["verify", s(&lower), s(&out)])), 1);

    let witness = fs::read_to_string(&verdict).unwrap();
    let tampered = witness.replace("\"6\"", "\"5\"");
    assert_ne!(tampered, witness);
    fs::write(&verdict, tampered).unwrap();
    assert_eq!(code(&run(&["verify", s(&lower), s(&verdict)])), 1);
}

#[test]
fn four_point_check_and_undecided_exit() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("four.json");
    fs::write(&p, r#"{"points": [["0","0"],["1","1"],["2","8"],["3","27"]]}"#).unwrap();
    let o = run(&["check", s(&p)]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("interpolable"));
    let verdict = dir.path().join("four.verdict.json");
    assert_eq!(code(&run(&["verify", s(&p), s(&verdict)])), 0);
    let text = fs::read_to_string(&verdict).unwrap();
    let tampered = text.replacen("\"c\": \"", "\"c\": \"-", 1);
    assert_ne!(tampered, text);
    fs::write(&verdict, tampered).unwrap();
    assert_eq!(code(&run(&["verify", s(&p), s(&verdict)])), 1);

    let gen = run(&["gen", "expdigits", "--m", "2", "--out-dir", s(dir.path())]);
    assert_eq!(code(&gen), 0);
    let hard = dir.path().join("expdigits_m2.json");
    let o = run(&["check", s(&hard), "--max-rounds", "0", "--max-cuts", "0"]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stdout));
    assert!(fs::read_to_string(dir.path().join("expdigits_m2.verdict.json")).unwrap().contains("undecided"));
}

#[test]
fn nonlocal_and_toy_generation() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&run(&["gen", "nonlocal", "--n", "4", "--out-dir", s(d)])), 0);
    let pts = fs::read_to_string(d.join("nonlocal_n4.json")).unwrap();
    assert!(pts.contains("\"5\",\n      \"-1\""));
    assert!(d.join("nonlocal_n4.sidecar.json").exists());
    assert_eq!(code(&run(&["gen", "nonlocal", "--n", "5", "--out-dir", s(d)])), 1);
    assert_eq!(code(&run(&["gen", "nonlocal", "--out-dir", s(d)])), 1);

    assert_eq!(code(&run(&["gen", "toy", "--m", "4", "--out-dir", s(d)])), 0);
    assert!(fs::read_to_string(d.join("toy_m4.json")).unwrap().contains("real-line"));
    assert!(d.join("toy_m4.dat-s").exists());
    assert_eq!(code(&run(&["gen", "toy", "--m", "1", "--out-dir", s(d)])), 1);
}

#[test]
fn export_sdp_counts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&run(&["gen", "expdigits", "--m", "0", "--out-dir", s(d)])), 0);
    assert_eq!(code(&run(&["export-sdp", s(&d.join("expdigits_m0.json"))])), 0);
    let text = fs::read_to_string(d.join("expdigits_m0.dat-sx")).unwrap();
    let header: Vec<&str> = text.lines().filter(|l| !l.starts_with('*')).take(2).collect();
    assert_eq!(header, ["16", "7"]);
}

#[test]
fn extract_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("cubic.json");
    let pts: Vec<String> = (0..10).map(|j| format!("[\"{j}\",\"{}\"]", -j * j * j)).collect();
    fs::write(&p, format!("{{\"points\": [{}]}}", pts.join(","))).unwrap();
    let o = run(&["extract", s(&p), "--n", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let ev = dir.path().join("cubic.extract.json");
    assert!(fs::read_to_string(&ev).unwrap().contains("\"mirrored\": true"));
    assert_eq!(code(&run(&["verify", s(&p), s(&ev)])), 0);
    assert_eq!(code(&run(&["extract", s(&p), "--n", "20"])), 1);
}

#[test]
fn eps_chain_table() {
    let o = run(&["eps-chain", "--m", "2"]);
    assert_eq!(code(&o), 0);
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.contains("approx"));
    assert!(out.contains("eps_2 in (0, eps_1^2/5)"));
    assert!(out.lines().any(|l| l.trim_start().starts_with("0 ") && l.contains("[1, 1]")));
}

#[test]
fn outputs_are_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [a.path(), b.path()] {
        assert_eq!(code(&run(&["gen", "expdigits", "--m", "1", "--out-dir", s(d)])), 0);
        assert_eq!(code(&run(&["check", s(&d.join("expdigits_m1.json"))])), 0);
    }
    for f in ["expdigits_m1.json", "expdigits_m1.sidecar.json", "expdigits_m1.verdict.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap());
    }
}

#[test]
fn bad_input_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    fs::write(&p, "{\"points\": [[\"1\",\"0\"],[\"0\",\"0\"]]}").unwrap();
    assert_eq!(code(&run(&["check", s(&p)])), 1);
    assert_eq!(code(&run(&["check", s(&dir.path().join("missing.json"))])), 1);
}
