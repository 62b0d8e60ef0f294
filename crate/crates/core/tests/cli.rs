use std::path::Path;
use std::process::{Command, Output};

fn curvedkin(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvedkin"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .env_remove("CURVEDKIN_SEED")
        .output()
        .unwrap()
}

fn rows(path: &Path) -> Vec<serde_json::Value> {
    let text = std::fs::read_to_string(path).unwrap();
    serde_json::from_str::<serde_json::Value>(&text).unwrap().as_array().unwrap().clone()
}

#[test]
fn default_campaign_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = curvedkin(&["all", "--count", "6", "--samples", "20000"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for suite in ["metrics", "kinematic", "containment", "bonnesen", "sweep"] {
        let rs = rows(&dir.path().join(format!("{suite}.json")));
        assert!(!rs.is_empty(), "{suite}");
        for r in &rs {
            assert_eq!(r["suite"], suite);
            assert_eq!(r["seed"], 42);
            assert!(r["satisfied"] != false, "{r}");
        }
    }
}

#[test]
fn reports_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["verify-kinematic", "--count", "4", "--samples", "10000", "--seed", "7", "--workers", "2"];
    assert!(curvedkin(&args, a.path()).status.success());
    assert!(curvedkin(&args, b.path()).status.success());
    let read = |d: &Path| std::fs::read(d.join("kinematic.json")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}

#[test]
fn seed_from_environment() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_curvedkin"))
        .args(["metrics", "--count", "3", "--out"])
        .arg(a.path())
        .env("CURVEDKIN_SEED", "99")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(curvedkin(&["metrics", "--count", "3", "--seed", "99"], b.path()).status.success());
    let read = |d: &Path| std::fs::read(d.join("metrics.json")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
    assert_eq!(rows(&a.path().join("metrics.json"))[0]["seed"], 99);
}

#[test]
fn disc_bonnesen_rows_near_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = curvedkin(
        &["verify-bonnesen", "--kappa", "1", "--disc-radius", "0.5", "--disc-sides", "64"],
        dir.path(),
    );
    assert!(out.status.success());
    let rs = rows(&dir.path().join("bonnesen.json"));
    let bounds: Vec<_> = rs.iter().filter(|r| !r["bound_name"].is_null()).collect();
    assert_eq!(bounds.len(), 4);
    for r in bounds {
        assert!(r["bound_value"].as_f64().unwrap() < 1e-3, "{r}");
        assert_eq!(r["kappa"], 1.0);
    }
}

#[test]
fn csv_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = curvedkin(&["sweep-kappa", "--format", "csv"], dir.path());
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "suite,check,kappa,body_id,A,P,r_in,R_circ,deficit,bound_name,bound_value,slack,satisfied,mc_mean,mc_stderr,samples,seed,tolerance"
    );
    assert_eq!(lines.count(), 9);
}

#[test]
fn body_file_campaign() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bodies.txt");
    std::fs::write(
        &file,
        "# two bodies\nkappa -1\nv 0.8 0\nv 0.8 2.1\nv 0.5 4.0\n\nkappa 1\nv 0.6 0.2\nv 0.7 1.9\nv 0.4 3.3\nv 0.6 4.8\n",
    )
    .unwrap();
    let out = curvedkin(&["verify-bonnesen", "--body-file", file.to_str().unwrap()], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rs = rows(&dir.path().join("bonnesen.json"));
    assert!(rs.iter().any(|r| r["kappa"] == -1.0) && rs.iter().any(|r| r["kappa"] == 1.0));
}

#[test]
fn malformed_body_file_names_vertex() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.txt");
    std::fs::write(&file, "kappa 0\nv 1 0\nv 1 2\nv 1 nope\n").unwrap();
    let out = curvedkin(&["metrics", "--body-file", file.to_str().unwrap()], dir.path());
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.txt:4") && err.contains("vertex 2"), "{err}");
}

#[test]
fn invalid_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let out = curvedkin(&["verify-kinematic", "--samples", "10"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("samples"));
    let out = curvedkin(&["verify-bonnesen", "--kappa", "1", "--disc-radius", "2"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("disc-radius"));
}
