use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).to_path_buf()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pilab"))
        .current_dir(root())
        .args(args)
        .env_remove("PILAB_BUDGET_MS")
        .output()
        .expect("spawn pilab")
}

fn golden(name: &str, args: &[&str]) {
    let expected = std::fs::read_to_string(root().join("tests/golden").join(name)).unwrap();
    for workers in ["1", "4"] {
        let mut full = vec!["--workers", workers];
        full.extend_from_slice(args);
        let out = run(&full);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(String::from_utf8(out.stdout).unwrap(), expected, "{name} with {workers} workers");
    }
}

#[test]
fn inspect_ut11() {
    golden("inspect_ut11.json", &["inspect", "--input", "corpus/ut11.json"]);
}

#[test]
fn cochar_m2() {
    golden("cochar_m2_4.json", &["cochar", "--input", "corpus/m2.json", "-n", "4"]);
}

#[test]
fn hilbert_ut11() {
    golden("hilbert_ut11.json", &["hilbert", "--input", "corpus/ut11.json", "-m", "2", "-d", "6"]);
}

#[test]
fn kemer_qplusq() {
    golden("kemer_qplusq.json", &["kemer", "--input", "corpus/qplusq.json"]);
}

#[test]
fn vpart_count_and_delta() {
    golden("vpart_count.json", &["vpart", "count", "--input", "tests/inputs/vectors.json", "--b", "2,1"]);
    golden("vpart_delta.json", &["vpart", "delta", "--input", "tests/inputs/vectors.json"]);
}

#[test]
fn series_expand() {
    golden("series.json", &["series", "--input", "tests/inputs/series.json", "--expand", "10"]);
}

#[test]
fn dims() {
    golden("dims.json", &["dims", "-m", "3", "-t", "2", "-q", "1"]);
}

#[test]
fn malformed_input_exits_2() {
    let dir = std::env::temp_dir().join(format!("pilab-golden-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"dim\":1,\"table\":[[[1").unwrap();
    let out = run(&["inspect", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["inspect", "--input", "no/such/file.json"]);
    assert_eq!(out.status.code(), Some(2));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn tiny_budget_exits_3() {
    let out = run(&["--budget", "0", "hilbert", "--input", "corpus/m2.json", "-m", "3", "-d", "8"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}
