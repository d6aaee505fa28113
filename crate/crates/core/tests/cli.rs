use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn wreathkit(dir: &Path, args: &[&str]) -> Run {
    let Output { status, stdout, stderr } = Command::new(env!("CARGO_BIN_EXE_wreathkit"))
        .current_dir(dir)
        .env_remove("WREATHKIT_FIELD")
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: status.code().expect("exit code"),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn workspace() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in [
        ("free2.pres", "generators x y\n"),
        ("b.pres", "unital true\ngenerators x y\n"),
        ("a.pres", "unital true\ngenerators u\nrel u^2\n"),
        ("bad.pres", "generators x\nrel x*z\n"),
        ("g.map", "map x -> u\nmap y -> 1\n"),
    ] {
        std::fs::write(dir.path().join(name), text).unwrap();
    }
    dir
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

#[test]
fn growth_of_free_algebra() {
    let d = workspace();
    let r = wreathkit(d.path(), &["growth", "-p", "free2.pres", "-N", "5"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("g(V, 5) = 62\n# command=growth N=5 seed=0 policy=truncate\nn,dim,exact\n"));
    let rows: Vec<&str> = r.stdout.lines().skip(3).collect();
    assert_eq!(rows, ["1,2,true", "2,6,true", "3,14,true", "4,30,true", "5,62,true"]);
    assert!(r.stderr.contains("elapsed"));
}

#[test]
fn emitted_csv_is_byte_stable() {
    let d = workspace();
    let run = |out: &str| {
        let r = wreathkit(
            d.path(),
            &["--seed", "3", "wgamma", "--B", "b.pres", "--A", "a.pres", "--gamma", "g.map", "-N", "4", "-n", "3", "--emit", out],
        );
        assert_eq!(r.code, 0, "{}", r.stderr);
        std::fs::read(path(&d, out)).unwrap()
    };
    let first = run("one.csv");
    assert_eq!(first, run("two.csv"));
    let text = String::from_utf8(first).unwrap();
    assert!(text.starts_with("# command=wgamma NB=4 NA=4 n=3 seed=3 policy=truncate\nn,dim,exact\n"));
}

#[test]
fn json_mirrors_rows() {
    let d = workspace();
    let r = wreathkit(d.path(), &["--json", "g.json", "growth", "-p", "free2.pres", "-N", "3"]);
    assert_eq!(r.code, 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path(&d, "g.json")).unwrap()).unwrap();
    assert_eq!(v["exact"], true);
    let dims: Vec<u64> = v["rows"].as_array().unwrap().iter().map(|r| r["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, [2, 6, 14]);
}

#[test]
fn golod_shafarevich_verdicts() {
    let d = workspace();
    let r = wreathkit(d.path(), &["gs-check", "-m", "3", "--census", "2:1"]);
    assert_eq!((r.code, r.stdout.lines().next()), (0, Some("satisfiable, t0=2/5, value=-1/25")));
    let r = wreathkit(d.path(), &["gs-check", "-m", "2", "--census", "2:1"]);
    assert_eq!((r.code, r.stdout.trim()), (0, "unsatisfiable"));
    let r = wreathkit(d.path(), &["gs-check", "-m", "2", "--census", "2:1", "--t0", "1/2"]);
    assert_eq!(r.stdout.trim(), "not satisfied, t0=1/2, value=1/4");
    let r = wreathkit(d.path(), &["gs-check", "-m", "2", "--census", "2:x"]);
    assert_eq!(r.code, 1);
}

#[test]
fn nilpotency_and_overflow_exit_codes() {
    let d = workspace();
    let base = ["--B", "b.pres", "--A", "a.pres", "-N", "2"];
    let r = wreathkit(d.path(), &[&["nil-check"], &base[..], &["--expr", "e(1,2,1)"]].concat());
    assert_eq!((r.code, r.stdout.trim()), (0, "nilpotent, index 2"));

    let r = wreathkit(d.path(), &[&["wreath-eval"], &base[..], &["--expr", "x*x*x"]].concat());
    assert_eq!((r.code, r.stdout.trim()), (2, "0 [overflow]"));

    let r = wreathkit(d.path(), &[&["--policy", "reject", "wreath-eval"], &base[..], &["--expr", "x*x*x"]].concat());
    assert_eq!(r.code, 1);
    assert!(r.stderr.starts_with("error: "));
}

#[test]
fn errors_name_the_file_and_position() {
    let d = workspace();
    let r = wreathkit(d.path(), &["growth", "-p", "bad.pres", "-N", "3"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("bad.pres: 2:5: unknown generator `z`"), "{}", r.stderr);
    let r = wreathkit(d.path(), &["growth", "-p", "missing.pres", "-N", "3"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("missing.pres"));
}

#[test]
fn field_from_environment() {
    let d = workspace();
    let out = Command::new(env!("CARGO_BIN_EXE_wreathkit"))
        .current_dir(d.path())
        .env("WREATHKIT_FIELD", "nonsense")
        .args(["growth", "-p", "free2.pres", "-N", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let r = wreathkit(d.path(), &["--field", "gf7", "growth", "-p", "free2.pres", "-N", "2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
}

#[test]
fn lemma11_witness() {
    let d = workspace();
    let r = wreathkit(d.path(), &["lemma11", "-p", "free2.pres", "-N", "4", "--list", "x,y", "-s", "2"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("witness: "));
}
