use std::path::PathBuf;
use std::process::{Command, Output};

fn zfem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zfem")).args(args).output().expect("binary runs")
}

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(rel)
}

fn write_cartesian(dir: &std::path::Path, n: usize) -> PathBuf {
    let path = dir.join(format!("cart{n}.mesh"));
    zfem::meshgen::write_mesh(&zfem::meshgen::gen_cartesian(n), &path).unwrap();
    path
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_cartesian(dir.path(), 4);
    let out = zfem(&["validate", "--mesh", good.to_str().unwrap(), "--rho", "0.3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("valid"));

    let sliver = fixture("invalid/sliver.mesh");
    let out = zfem(&["validate", "--mesh", sliver.to_str().unwrap(), "--rho", "0.1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("cell 0 fails"));

    let bad = fixture("invalid/parse_error.mesh");
    let out = zfem(&["validate", "--mesh", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4, column 3"));

    let out = zfem(&["validate", "--mesh", dir.path().join("missing.mesh").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_cartesian(dir.path(), 2);
    let out = zfem(&["validate", "--mesh", good.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["cells"].as_array().unwrap().len(), 4);
    assert_eq!(v["passed"], true);
}

#[test]
fn poly_table() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("poly.csv");
    let dbg = dir.path().join("debug.jsonl");
    let out = zfem(&["poly", "--orders", "1..3", "--polygons", "triangle,star", "--out", csv.to_str().unwrap(), "--dump-element-debug", dbg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "polygon,k,nv,ndof,err0,errgrad");
    assert_eq!(lines.len(), 7);
    assert!(lines[4].starts_with("star,1,40,40,"));
    for line in &lines[1..] {
        let err: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
        assert!(err < 1e-9);
    }
    let debug = std::fs::read_to_string(&dbg).unwrap();
    assert_eq!(debug.lines().count(), 6);
    let first: serde_json::Value = serde_json::from_str(debug.lines().next().unwrap()).unwrap();
    assert_eq!(first["order"], 1);
}

#[test]
fn poly_usage_errors() {
    assert_eq!(zfem(&["poly", "--orders", "0..9"]).status.code(), Some(2));
    assert_eq!(zfem(&["poly", "--polygons", "blob"]).status.code(), Some(2));
    assert_eq!(zfem(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn converge_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = zfem(&["converge", "--family", "distorted", "--order", "1", "--levels", "3", "--seed", "5", "--no-timing", "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8_lossy(&out.stderr).contains("eoc family=distorted k=1 levels=3"));
    }
    let text = std::fs::read(&a).unwrap();
    assert_eq!(text, std::fs::read(&b).unwrap());
    let text = String::from_utf8(text).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "family,k,level,h,ndof,err0,errgrad,seconds");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("distorted,1,0,"));
    assert!(lines[1].ends_with(",0.000"));
}

#[test]
fn converge_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let files: Vec<String> = [16, 64, 256].iter().map(|n| fixture(&format!("voronoi/voronoi_{n:04}.mesh")).to_str().unwrap().to_string()).collect();
    let family = format!("file:{}", files.join(","));
    let dbg = dir.path().join("dbg.jsonl");
    let out = zfem(&["converge", "--family", &family, "--order", "2", "--dump-element-debug", dbg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.lines().count(), 4);
    assert!(stdout.lines().nth(1).unwrap().starts_with("file,2,0,"));
    // one record per element per level
    assert_eq!(std::fs::read_to_string(&dbg).unwrap().lines().count(), 16 + 64 + 256);
}

#[test]
fn converge_failures() {
    assert_eq!(zfem(&["converge", "--family", "voronoi", "--order", "1"]).status.code(), Some(2));
    assert_eq!(zfem(&["converge", "--family", "cartesian", "--order", "7"]).status.code(), Some(2));
    assert_eq!(zfem(&["converge", "--family", "cartesian", "--order", "2", "--quad-degree", "3"]).status.code(), Some(2));
    // a missing second level still flushes the first record
    let dir = tempfile::tempdir().unwrap();
    let first = write_cartesian(dir.path(), 2);
    let family = format!("file:{},{}", first.display(), dir.path().join("nope.mesh").display());
    let out = zfem(&["converge", "--family", &family, "--order", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 2);
    // a cell that is not star-shaped is a validation failure
    let comb = dir.path().join("comb.mesh");
    std::fs::write(&comb, "zfem-mesh 1\n8 1\n0 0\n3 0\n3 1\n2.9 0.05\n1.5 1\n0.1 0.05\n0 1\n-0.0 0.5\n8 0 1 2 3 4 5 6 7\n").unwrap();
    let out = zfem(&["converge", "--family", &format!("file:{}", comb.display()), "--order", "1"]);
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
}
