mod common;

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn aphasim(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aphasim"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn jsonl(path: &Path) -> Vec<Value> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

const TRANSCRIPT: &str = "\
@Begin
@Participants:\tPAR Participant, INV Investigator
*INV:\ttell me what happened . 0_1200
*PAR:\tI I went to the &-um store . 1300_2500
%mor:\tpro|I v|go&PAST
*PAR:\t<the the> [/] the dog ran away
\tand it's gone . 2600_4100
*PAR:\txxx . 4200_4300
@End
";

#[test]
fn preprocess_chat() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("t.cha"), TRANSCRIPT).unwrap();
    let out = aphasim(
        &["preprocess", "--source", "aphasic", "--input", "t.cha", "--output", "u.jsonl", "--speakers", "PAR"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = jsonl(&dir.path().join("u.jsonl"));
    let texts: Vec<&str> = rows.iter().map(|r| r["text"].as_str().unwrap()).collect();
    assert_eq!(texts, ["I went to the store.", "The dog ran away and it is gone."]);
    assert_eq!(rows[0]["source"], "aphasic");
}

#[test]
fn generate_report_and_distinguish() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.conllu"), common::spoken_conllu(4000, 3)).unwrap();
    let out = aphasim(
        &["generate", "--input", "c.conllu", "--seed", "5", "--output", "p.jsonl", "--report", "r.json"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let pairs = jsonl(&dir.path().join("p.jsonl"));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["emitted"].as_u64().unwrap() as usize, pairs.len());
    assert_eq!(report["input_sentences"], 4000);
    assert_eq!(report["seed"], 5);
    for p in &pairs {
        assert_eq!(p["seed"], 5);
        assert!(p["trace"].is_array());
    }

    let out = aphasim(
        &[
            "distinguish", "--a", "p.jsonl", "--a-field", "original", "--b", "p.jsonl", "--b-field",
            "synthetic", "--seed", "1", "--output", "d.json",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let d: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("d.json")).unwrap()).unwrap();
    assert!(d["accuracy"].as_f64().unwrap() > 0.5);
}

#[test]
fn all_zero_rules_emit_nothing() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.conllu"), common::spoken_conllu(500, 4)).unwrap();
    let mut args = vec!["generate", "--input", "c.conllu", "--output", "p.jsonl"];
    for flag in [
        "--p-noun-number", "--p-content-discard", "--p-pronoun-swap", "--p-function-discard", "--p-verb-lemma",
    ] {
        args.extend([flag, "0"]);
    }
    let out = aphasim(&args, dir.path());
    assert!(out.status.success());
    assert!(std::fs::read_to_string(dir.path().join("p.jsonl")).unwrap().is_empty());
}

#[test]
fn score_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let lines = "I went home.\nThe dog barked at the cat.\nWe had enough.\n";
    std::fs::write(dir.path().join("h.txt"), lines).unwrap();
    std::fs::write(dir.path().join("r.txt"), lines).unwrap();
    std::fs::write(dir.path().join("eh.txt"), "1 2 3\n0 1 0\n2 2 1\n").unwrap();
    std::fs::write(dir.path().join("er.txt"), "2 4 6\n0 3 0\n4 4 2\n").unwrap();
    let out = aphasim(
        &[
            "score", "--hyp", "h.txt", "--ref", "r.txt", "--emb-hyp", "eh.txt", "--emb-ref", "er.txt",
            "--output", "-",
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["chrf"]["mean"], 100.0);
    assert_eq!(v["chrf"]["standard_error"], 0.0);
    assert_eq!(v["chrf"]["n"], 3);
    assert!((v["cosine"]["mean"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(aphasim(&["generate"], dir.path()).status.code(), Some(1));
    assert_eq!(aphasim(&["frobnicate"], dir.path()).status.code(), Some(1));
    assert_eq!(
        aphasim(&["generate", "--input", "missing.conllu", "--output", "x"], dir.path()).status.code(),
        Some(2)
    );
    assert_eq!(
        aphasim(&["generate", "--input", "missing.conllu", "--output", "x", "--p-verb-lemma", "1.5"], dir.path())
            .status
            .code(),
        Some(2)
    );

    std::fs::write(dir.path().join("bad.conllu"), "1\tword\tword\tNOUN\t_\t_\t5\troot\t_\t_\n\n").unwrap();
    let strict = aphasim(&["generate", "--input", "bad.conllu", "--output", "o.jsonl"], dir.path());
    assert_eq!(strict.status.code(), Some(2));
    assert!(!dir.path().join("o.jsonl").exists(), "failed runs leave no output");
    let lenient = aphasim(&["generate", "--input", "bad.conllu", "--output", "o.jsonl", "--lenient"], dir.path());
    assert_eq!(lenient.status.code(), Some(0));
}

#[test]
fn help_shows_defaults() {
    let out = aphasim(&["generate", "--help"], Path::new("."));
    assert_eq!(out.status.code(), Some(0));
    let help = String::from_utf8_lossy(&out.stdout);
    for needle in ["[default: 0.3]", "[default: 0.7]", "[default: 15]", "[default: 0.25]"] {
        assert!(help.contains(needle), "missing {needle}");
    }
}
