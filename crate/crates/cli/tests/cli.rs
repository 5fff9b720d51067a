use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn groth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_groth"))
        .args(args)
        .env_remove("GROTH_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn groth_text_and_json() {
    let o = groth(&["groth", "1423"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 5);
    assert_eq!(text.lines().next().unwrap(), " 1  x2^2");
    assert_eq!(stdout(&groth(&["groth", "12"])), "1\n");

    let o = groth(&["groth", "1423", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["nvars"], 4);
}

#[test]
fn top_is_the_highest_component() {
    let top = stdout(&groth(&["top", "14253"]));
    let g = stdout(&groth(&["groth", "14253", "--json"]));
    let v: Value = serde_json::from_str(&g).unwrap();
    let degree = v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["e"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).sum::<u64>())
        .max()
        .unwrap();
    let component = stdout(&groth(&["component", "14253", &degree.to_string()]));
    assert_eq!(top, component);
    let h = stdout(&groth(&["homogenize", "14253"]));
    assert!(h.contains('z'));
}

#[test]
fn diagram_commands() {
    assert!(stdout(&groth(&["bd", "1423"])).starts_with("8 diagrams\n"));
    assert!(stdout(&groth(&["sbd", "1423"])).starts_with("6 diagrams\n"));
    let v: Value = serde_json::from_str(&stdout(&groth(&["sbd", "1423", "--json"]))).unwrap();
    assert_eq!(v["count"], 6);
    assert_eq!(stdout(&groth(&["dtop", "1423"])), " .  0  .  .\n . 1*  1  .\n .  .  .  .\n .  .  .  .\n");
    assert!(stdout(&groth(&["bpd", "132"])).starts_with("2 pipe dreams\n"));
}

#[test]
fn exit_codes() {
    let o = groth(&["dtop", "2143"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("error"));
    assert_eq!(groth(&["groth", "1123"]).status.code(), Some(2));
    assert_eq!(groth(&["bd", "123456789"]).status.code(), Some(3));
    assert_eq!(groth(&["verify", "matrices", "--nmax", "11"]).status.code(), Some(3));
    assert_eq!(groth(&["verify", "nosuch"]).status.code(), Some(2));
}

#[test]
fn render_svg_from_json() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("d.json");
    let svg = dir.path().join("d.svg");
    let v: Value = serde_json::from_str(&stdout(&groth(&["dtop", "1423", "--json"]))).unwrap();
    fs::write(&input, v.to_string()).unwrap();
    let o = groth(&["render", input.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));

    let v: Value = serde_json::from_str(&stdout(&groth(&["bpd", "132", "--json"]))).unwrap();
    fs::write(&input, v["bpds"][0].to_string()).unwrap();
    let o = groth(&["render", input.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));

    fs::write(&input, "{}").unwrap();
    assert_eq!(groth(&["render", input.to_str().unwrap(), "--svg", svg.to_str().unwrap()]).status.code(), Some(2));
}

fn reports(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn verify_suites_pass() {
    for args in [
        &["verify", "matrices"][..],
        &["verify", "theorem1", "--nmax", "5"],
        &["verify", "sbd", "--nmax", "4", "--jobs", "2"],
    ] {
        let o = groth(args);
        assert!(o.status.success(), "{args:?}: {}", stdout(&o));
        let rs = reports(&o);
        assert!(!rs.is_empty());
        assert!(rs.iter().all(|r| r["pass"] == true && r["counterexample"].is_null()));
        assert!(stderr(&o).contains(&format!("{0} of {0} checks passed", rs.len())));
    }
}

fn entries(dir: &Path) -> Vec<std::path::PathBuf> {
    fs::read_dir(dir).map(|d| d.map(|e| e.unwrap().path()).collect()).unwrap_or_default()
}

#[test]
fn cache_hits_recovers_and_clears() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_groth"))
            .args(args)
            .env("GROTH_CACHE_DIR", &cache)
            .output()
            .unwrap()
    };
    let first = run(&["groth", "14253"]);
    assert!(first.status.success());
    let files = entries(&cache);
    assert_eq!(files.len(), 1);
    let stamp = fs::metadata(&files[0]).unwrap().modified().unwrap();

    let second = run(&["groth", "14253"]);
    assert_eq!(stdout(&first), stdout(&second));
    assert!(stderr(&second).is_empty());
    assert_eq!(fs::metadata(&files[0]).unwrap().modified().unwrap(), stamp);

    fs::write(&files[0], "garbage").unwrap();
    let third = run(&["groth", "14253"]);
    assert_eq!(stdout(&first), stdout(&third));
    assert!(stderr(&third).contains("corrupt cache entry"));
    assert!(fs::read_to_string(&files[0]).unwrap().contains("14253"));

    let o = run(&["cache", "clear"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("removed 1 entries"));
    assert!(entries(&cache).is_empty());

    let flag = dir.path().join("flag");
    let o = groth(&["--cache-dir", flag.to_str().unwrap(), "groth", "132"]);
    assert!(o.status.success());
    assert_eq!(entries(&flag).len(), 1);
    assert_eq!(groth(&["cache", "clear"]).status.code(), Some(2));

    let o = Command::new(env!("CARGO_BIN_EXE_groth"))
        .args(["--cache-dir", flag.to_str().unwrap(), "groth", "1432"])
        .env("GROTH_CACHE_DIR", &cache)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(entries(&cache).len(), 1);
    assert_eq!(entries(&flag).len(), 1);
}
