//! End-to-end runs of the command line against real files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pfalg"))
}

fn data(file: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../pfalg-core/data/examples")
        .join(file)
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn closure_then_check_then_represent_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let alg_path = dir.path().join("ucq-res.alg");

    // close the update example's functions under restriction only
    let out = bin()
        .args(["closure", "--functions"])
        .arg(data("updatecapqv.pfun"))
        .args(["--sig", "res", "--out"])
        .arg(&alg_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("elements: 6"));

    // the reduct is a right normal band
    let out = bin()
        .args(["check", "--laws", "rnb", "--algebra"])
        .arg(&alg_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("law rnb.1: pass"));

    // a band is representable; export and re-verify bit for bit
    let rep_path = dir.path().join("ucq-res.rep");
    let out = bin()
        .args(["represent", "--algebra"])
        .arg(&alg_path)
        .args(["--sig", "res", "--out"])
        .arg(&rep_path)
        .arg("--verify")
        .output()
        .unwrap();
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("injective: pass"));
    assert!(text.contains("re-read: byte-identical: pass"));
    assert!(text.contains("re-check of exported images: pass"));
    let exported = fs::read_to_string(&rep_path).unwrap();
    assert!(exported.starts_with("representation\n"));
    assert!(exported.contains("source: "));
}

#[test]
fn check_a_law_file_from_disk() {
    let dir = tempfile::tempdir().unwrap();
    let laws = dir.path().join("two.laws");
    fs::write(&laws, "res(x,x) = x\nres(x,y) = res(y,x)\n").unwrap();
    // the second law is false for partial functions: exit 1 with a witness
    let out = bin()
        .args(["check", "--laws"])
        .arg(&laws)
        .args(["--universe", "2x2", "--exhaustive"])
        .output()
        .unwrap();
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(1), "{text}");
    assert!(text.contains("law two.1: pass"));
    assert!(text.contains("law two.2: FAIL at"));
}

#[test]
fn sampled_check_is_available_and_seeded() {
    let out1 = bin()
        .args([
            "check",
            "--laws",
            "rnb",
            "--universe",
            "pt2",
            "--sample",
            "100",
            "--seed",
            "7",
        ])
        .output()
        .unwrap();
    let out2 = bin()
        .args([
            "check",
            "--laws",
            "rnb",
            "--universe",
            "pt2",
            "--sample",
            "100",
            "--seed",
            "7",
        ])
        .output()
        .unwrap();
    assert_eq!(out1.status.code(), Some(0));
    assert_eq!(stdout(&out1), stdout(&out2));
}

#[test]
fn quarantined_laws_do_not_flip_the_exit_code() {
    // the difference/restriction set carries one documented misprint
    let out = bin()
        .args(["check", "--laws", "borlido", "--universe", "2x2"])
        .output()
        .unwrap();
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("law borlido.4: FAIL"));
    assert!(text.contains("[quarantined]"));
}

#[test]
fn search_with_negated_law_prints_model_and_witness() {
    // a band whose restriction is not commutative exists at size 2
    let out = bin()
        .args([
            "search",
            "--laws",
            "rnb",
            "--size",
            "2",
            "--negate",
            "res(x,y) = res(y,x)",
        ])
        .output()
        .unwrap();
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("outcome: model found"), "{text}");
    assert!(text.contains("negated law fails at"), "{text}");
}

#[test]
fn oversized_universes_are_an_input_error() {
    let out = bin()
        .args(["check", "--laws", "rnb", "--universe", "pt5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["check", "--laws", "rnb", "--universe", "pt0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn least_number_pruning_still_finds_models() {
    let out = bin()
        .args([
            "search",
            "--laws",
            "rnb",
            "--size",
            "3",
            "--negate",
            "res(x,y) = res(y,x)",
            "--lnh",
        ])
        .output()
        .unwrap();
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("outcome: model found"), "{text}");
}

#[test]
fn negating_an_axiom_of_the_set_exhausts_small_sizes() {
    for size in ["1", "2", "3"] {
        let out = bin()
            .args(["search", "--laws", "rnb", "--size", size, "--negate", "2"])
            .output()
            .unwrap();
        let text = stdout(&out);
        assert_eq!(out.status.code(), Some(0), "{text}");
        assert!(text.contains("outcome: exhausted"), "{text}");
    }
}

#[test]
fn reproduce_all_matches_the_golden_transcript() {
    let out = bin().args(["reproduce", "all"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let golden = include_str!("golden/reproduce-all.txt");
    assert_eq!(stdout(&out), golden, "reproduce output drifted");
}

#[test]
fn search_stdout_is_deterministic() {
    let run = || {
        let out = bin()
            .args([
                "search", "--laws", "capslick", "--size", "3", "--negate", "1",
            ])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        stdout(&out)
    };
    let a = run();
    assert!(a.contains("nodes: "));
    assert_eq!(a, run());
}

#[test]
fn unknown_laws_are_a_usage_error() {
    let out = bin()
        .args(["check", "--laws", "no-such-set", "--universe", "2x2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_mirror_is_valid_json_with_the_same_content() {
    let out = bin()
        .args(["reproduce", "droi", "--json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["command"], "reproduce");
    assert_eq!(v["ok"], true);
    let text = serde_json::to_string(&v["sections"]).unwrap();
    assert!(text.contains("fails first at (s,t)=(e,i)"));

    // the plain run carries the same fact line
    let plain = bin().args(["reproduce", "droi"]).output().unwrap();
    assert!(stdout(&plain).contains("fails first at (s,t)=(e,i)"));
}

#[test]
fn represent_refusal_exits_one_with_a_witness() {
    // build a file for the skew example closed under res and ovr, adjoin
    // nothing: representing it as res,ovr is unsupported (exit 2), and as
    // res,cap,ovr it lacks the table (exit 2); the refusal-with-witness
    // path is covered by `reproduce droi`
    let dir = tempfile::tempdir().unwrap();
    let alg_path = dir.path().join("droi.alg");
    let out = bin()
        .args(["closure", "--functions"])
        .arg(data("droi.pfun"))
        .args(["--sig", "res,ovr", "--out"])
        .arg(&alg_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = bin()
        .args(["represent", "--algebra"])
        .arg(&alg_path)
        .args(["--sig", "res,ovr"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "unsupported signature");
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("no representation route"), "{err}");
}

#[test]
fn irredundance_reports_every_law() {
    let out = bin()
        .args(["irredundance", "--laws", "capslick", "--max-size", "4"])
        .output()
        .unwrap();
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{text}");
    for k in 1..=5 {
        assert!(text.contains(&format!("omit capslick.{k}")));
    }
    assert_eq!(text.matches("certificate: counter-model").count(), 5);
}

#[test]
fn timeout_env_var_is_honoured() {
    // an impossible search bounded by a one-second budget aborts cleanly
    let out = bin()
        .env("PFALG_TIMEOUT_SECS", "1")
        .args(["search", "--laws", "minus", "--size", "5"])
        .output()
        .unwrap();
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(
        text.contains("outcome: timeout") || text.contains("outcome: model found"),
        "{text}"
    );
}
