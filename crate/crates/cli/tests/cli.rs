use std::path::PathBuf;

use assert_cmd::Command;
use predicates::prelude::*;
use predicates::str::contains;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn hodge() -> Command {
    Command::cargo_bin("hodge").unwrap()
}

#[test]
fn diamond_of_rank_one() {
    let rows = ["    0    2    1", "    1    1    4", "    1    2    4", "    1    3    1", "    2    0    1", "    2    1    4", "    2    2    4", "    3    1    1"];
    let mut pred = contains("m = 4").boxed();
    for r in rows {
        pred = pred.and(contains(r)).boxed();
    }
    hodge().arg("diamond").arg(fixture("a1-1.json")).assert().success().stdout(pred);
}

#[test]
fn elliptic_markers() {
    hodge()
        .arg("markers")
        .arg(fixture("elliptic.json"))
        .assert()
        .success()
        .stdout(contains("m = 2\nlambda = 1\ne0 = 0").and(contains("einf = 1")).and(contains("ed = 1")));
}

#[test]
fn monodromy_shift() {
    hodge()
        .args(["check", "--suite", "monodromy", "--shift", "3"])
        .arg(fixture("elliptic.json"))
        .assert()
        .success()
        .stdout(contains("PASS  monodromy/exact/[3]"));
}

#[test]
fn full_check_on_levi() {
    hodge().arg("check").arg(fixture("levi.json")).assert().success().stdout(contains("PASS  psh/levi"));
}

#[test]
fn weight_two_is_not_hermitian() {
    hodge().arg("lie").arg(fixture("a2-1.json")).assert().success().stdout(contains("hermitian  fail"));
}

#[test]
fn eval_and_probe() {
    hodge()
        .args(["eval", "--t", "0.1+0.05i,0.02,0.01i"])
        .arg(fixture("elliptic.json"))
        .assert()
        .success()
        .stdout(contains("h~"));
    hodge().arg("probe").arg(fixture("elliptic.json")).arg("f-infinity").assert().success();
    hodge()
        .args(["probe", "--exponents", "2"])
        .arg(fixture("elliptic.json"))
        .arg("term-vanishing")
        .assert()
        .success();
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("r{i}.json"));
        hodge().arg("check").arg(fixture("a1-2-two.json")).arg("--report").arg(&out).assert().success();
        texts.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
    let report: serde_json::Value = serde_json::from_slice(&texts[0]).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["fixture_version"], "hodge-fixture/1");
}

#[test]
fn induced_fixture_reproduces_the_diamond() {
    let out = hodge().arg("induce").arg(fixture("a1-1.json")).output().unwrap();
    assert!(out.status.success());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.json");
    std::fs::write(&path, &out.stdout).unwrap();
    hodge()
        .arg("diamond")
        .arg(&path)
        .assert()
        .success()
        .stdout(contains("H  weight 3, dim 20").and(contains("    3    1    1")));
    assert_eq!(out.stdout, std::fs::read(fixture("a1-1-induced.json")).unwrap());
}

#[test]
fn malformed_json_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"version\": \"hodge-fixture/1\",\n  \"dim\": 2,,\n}\n").unwrap();
    hodge().arg("diamond").arg(&path).assert().code(2).stderr(contains("line 3"));
}

#[test]
fn wrong_shape_names_the_field() {
    let text = std::fs::read_to_string(fixture("elliptic.json")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("short.json");
    std::fs::write(&path, text.replace("\"q\": [[\"0\", \"1\"], [\"-1\", \"0\"]]", "\"q\": [[\"0\", \"1\"], [\"-1\"]]")).unwrap();
    hodge().arg("diamond").arg(&path).assert().code(2).stderr(contains("q[1]"));
}

#[test]
fn reversed_cone_fails_polarization() {
    let mut file: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(fixture("elliptic.json")).unwrap()).unwrap();
    file.as_object_mut().unwrap().remove("zeta");
    file["cone"][0][1][0] = "-1".into();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("reversed.json");
    std::fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
    hodge()
        .args(["check", "--suite", "symmetries"])
        .arg(&path)
        .assert()
        .code(1)
        .stdout(contains("FAIL  polarization/V"))
        .stderr(contains("polarization/V"));
}

#[test]
fn lemma_needs_two_generators() {
    hodge().args(["check", "--suite", "lemma-m"]).arg(fixture("elliptic.json")).assert().code(2);
}
