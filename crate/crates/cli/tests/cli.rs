use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use lbi_cli::{run, ClassifyDoc, EntailsDoc, IndependentDoc, ParseDoc};
use lbi_core::report::{EnumerationDoc, GapDoc, ProofDoc};
use tempfile::TempDir;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn lbi(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("lbi").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path
}

fn demo(dir: &TempDir, variant: &str) -> PathBuf {
    let path = dir.path().join(format!("{variant}.json"));
    let o = lbi(&["demo", "--variant", variant, "--out", path.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn parse_command() {
    let o = lbi(&["parse", "(p|~p)->q"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout, "(p | ~p) -> q\nsize: 6\natoms: p, q\n");
    let o = lbi(&["parse", "p"]);
    assert_eq!(o.stdout, "p\nsize: 1\natoms: p\n");
    let o = lbi(&["parse", "p->"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("offset 3"), "{}", o.stderr);
    assert!(o.stdout.is_empty());
    let o = lbi(&["--format", "machine", "parse", "(p|~p)->q"]);
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["formula"], "(p | ~p) -> q");
    assert_eq!(v["size"], 6);
    assert_eq!(v["atoms"], serde_json::json!(["p", "q"]));
}

#[test]
fn classify_command() {
    let dir = TempDir::new().unwrap();
    let eq1 = demo(&dir, "EQ1");
    assert_eq!(lbi(&["classify", "p|~p"]).stdout, "Tautology\n");
    assert_eq!(lbi(&["classify", "p&~p"]).stdout, "Contradiction\n");
    let o = lbi(&["classify", "--independent", "p", "--system", s(&eq1)]);
    assert_eq!((o.code, o.stdout.as_str()), (0, "independent: true\n"));
    let o = lbi(&["classify", "--entails", "q", "--system", s(&eq1)]);
    assert_eq!(o.stdout, "entails: true\n");
    let o = lbi(&["classify", "--entails", "p", "--system", s(&eq1)]);
    assert_eq!(o.stdout, "entails: false\ncountermodel: p=F q=T\n");
    let wide: Vec<String> = (0..21).map(|i| format!("x{i}")).collect();
    let o = lbi(&["classify", &wide.join(" | ")]);
    assert_eq!(o.code, 4, "{}", o.stderr);
    let o = lbi(&["classify", "--independent", "p"]);
    assert_eq!(o.code, 1);
    assert_eq!(lbi(&["classify"]).code, 1);
    assert_eq!(lbi(&["classify", "p &"]).code, 2);
}

#[test]
fn enumerate_command() {
    let dir = TempDir::new().unwrap();
    let eq1 = demo(&dir, "EQ1");
    let o = lbi(&["enumerate", "--system", s(&eq1)]);
    assert_eq!(o.code, 0);
    assert_eq!(
        o.stdout,
        "   0  g0  (p | ~p) -> q  AXIOM\n1 theorem(s), 1 generation(s) run, fixed point reached\n"
    );
    let mp = write(&dir, "mp.json", r#"{"axioms": ["p", "p -> q"]}"#);
    let o = lbi(&["--format", "machine", "enumerate", "--system", s(&mp)]);
    let doc: EnumerationDoc = serde_json::from_str(&o.stdout).unwrap();
    let formulas: Vec<_> = doc.theorems.iter().map(|t| t.formula.as_str()).collect();
    assert_eq!(formulas, ["p", "p -> q", "q"]);
    assert_eq!(doc.theorems[2].rule, "MP");
    assert_eq!(doc.theorems[2].generation, 1);
    assert!(doc.stats.fixed_point_reached);

    let bad = write(&dir, "bad.json", r#"{"axioms": ["p"], "rules": ["MP", "MAGIC"]}"#);
    let o = lbi(&["enumerate", "--system", s(&bad)]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("rules[1]"), "{}", o.stderr);
    let o = lbi(&["enumerate", "--system", s(&dir.path().join("missing.json"))]);
    assert_eq!(o.code, 1);
    let broken = write(&dir, "broken.json", r#"{"axioms": ["p ->"]}"#);
    let o = lbi(&["enumerate", "--system", s(&broken)]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("axioms[0]"), "{}", o.stderr);
}

#[test]
fn bound_overrides() {
    let dir = TempDir::new().unwrap();
    let sys = write(&dir, "and.json", r#"{"axioms": ["p", "q"], "rules": ["AND_INTRO"]}"#);
    let o = lbi(&["--max-size", "3", "enumerate", "--system", s(&sys)]);
    assert!(o.stdout.contains("6 theorem(s)"), "{}", o.stdout);
    assert!(o.stdout.contains("fixed point reached"));
    let o = lbi(&["enumerate", "--system", s(&sys), "--max-generations", "1", "--max-size", "7"]);
    assert!(o.stdout.contains("stopped at max_generations"), "{}", o.stdout);
    let eq1 = demo(&dir, "EQ1");
    let o = lbi(&["enumerate", "--system", s(&eq1), "--max-size", "5"]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("axioms[0]"));
}

#[test]
fn prove_command() {
    let dir = TempDir::new().unwrap();
    let mp = write(&dir, "mp.json", r#"{"axioms": ["p", "p -> q"]}"#);
    let o = lbi(&["prove", "--system", s(&mp), "--goal", "q"]);
    assert_eq!(o.code, 0);
    assert_eq!(
        o.stdout,
        "   0  p  AXIOM\n   1  p -> q  AXIOM\n   2  q  MP 0,1\nproof of q checked: 3 step(s)\n"
    );
    let eq1 = demo(&dir, "EQ1");
    let o = lbi(&["prove", "--system", s(&eq1), "--goal", "q"]);
    assert_eq!(o.code, 3);
    assert!(o.stderr.contains("fixed point reached without goal"), "{}", o.stderr);

    let lbi_sys = write(&dir, "lbi.json", r#"{"axioms": ["(p | ~p) -> q"], "rules": ["MP", "LBI_RULE"]}"#);
    let o = lbi(&["--format", "machine", "prove", "--system", s(&lbi_sys), "--goal", "q"]);
    assert_eq!(o.code, 0);
    let doc: ProofDoc = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(doc.steps.len(), 2);
    assert_eq!(doc.steps[1].rule, "LBI_RULE");
    assert!(doc.valid);

    let grow = write(&dir, "grow.json", r#"{"axioms": ["p"], "rules": ["AND_INTRO"], "bounds": {"max_generations": 1}}"#);
    let o = lbi(&["prove", "--system", s(&grow), "--goal", "q"]);
    assert_eq!(o.code, 3);
    assert!(o.stderr.contains("not derived within bounds"), "{}", o.stderr);
    assert_eq!(lbi(&["prove", "--system", s(&mp), "--goal", "q &"]).code, 2);
}

#[test]
fn gap_command() {
    let dir = TempDir::new().unwrap();
    let eq1 = demo(&dir, "EQ1");
    let o = lbi(&["--format", "machine", "gap", "--system", s(&eq1), "--close-with", "LBI_RULE"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let doc: GapDoc = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(doc.gap.len(), 1);
    assert_eq!(doc.gap[0].conclusion, "q");
    assert_eq!(doc.gap[0].witnesses[0].pivot, "p");
    assert_eq!(doc.gap_closed, Some(true));

    let two = demo(&dir, "TWO_BRANCH");
    let o = lbi(&["--format", "machine", "gap", "--system", s(&two), "--close-with", "CASE_SPLIT"]);
    let doc: GapDoc = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(doc.gap[0].conclusion, "y");
    assert_eq!(doc.gap[0].witnesses[0].pivot, "rh");
    assert_eq!(doc.gap_closed, Some(true));

    let mp = write(&dir, "mp.json", r#"{"axioms": ["p", "p -> q"]}"#);
    let o = lbi(&["gap", "--system", s(&mp)]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("gap: empty"), "{}", o.stdout);

    let text = lbi(&["gap", "--system", s(&eq1), "--close-with", "LEM_AXIOM"]);
    assert!(text.stdout.contains("with LEM_AXIOM: "), "{}", text.stdout);
    assert!(text.stdout.contains("gap closed: true"));

    let split = write(&dir, "split.json", r#"{"axioms": ["p"], "rules": ["MP", "CASE_SPLIT"]}"#);
    let o = lbi(&["gap", "--system", s(&split)]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("CASE_SPLIT"));
    assert_eq!(lbi(&["gap", "--system", s(&eq1), "--close-with", "MP"]).code, 1);
    assert_eq!(lbi(&["gap", "--system", s(&eq1), "--close-with", "NOPE"]).code, 1);
}

#[test]
fn demo_command() {
    let dir = TempDir::new().unwrap();
    let eq1 = demo(&dir, "EQ1");
    let body = fs::read_to_string(&eq1).unwrap();
    assert!(body.contains("\"(p | ~p) -> q\""));
    let two = demo(&dir, "TWO_BRANCH");
    let body = fs::read_to_string(&two).unwrap();
    assert!(body.contains("\"rh -> y\"") && body.contains("\"~rh -> y\""));
    let o = lbi(&["demo", "--variant", "EQ1"]);
    assert_eq!(o.stdout, fs::read_to_string(&eq1).unwrap());
    let unwritable = dir.path().join("no-such-dir").join("x.json");
    assert_eq!(lbi(&["demo", "--variant", "EQ1", "--out", s(&unwritable)]).code, 1);
    assert_eq!(lbi(&["demo", "--variant", "EQ2"]).code, 1);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(lbi(&[]).code, 1);
    assert_eq!(lbi(&["frobnicate"]).code, 1);
    assert_eq!(lbi(&["--format", "yaml", "parse", "p"]).code, 1);
    assert_eq!(lbi(&["enumerate"]).code, 1);
    let help = lbi(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("enumerate"));
}

#[test]
fn machine_outputs_round_trip_their_schema() {
    let dir = TempDir::new().unwrap();
    let eq1 = demo(&dir, "EQ1");
    let o = lbi(&["--format", "machine", "enumerate", "--system", s(&eq1)]);
    let doc: EnumerationDoc = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(lbi_core::report::to_json(&doc), o.stdout);
    let o = lbi(&["--format", "machine", "gap", "--system", s(&eq1), "--close-with", "LEM_AXIOM"]);
    let doc: GapDoc = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(lbi_core::report::to_json(&doc), o.stdout);
    fn same<T: serde::Serialize + serde::de::DeserializeOwned>(args: &[&str]) {
        let mut full = vec!["--format", "machine"];
        full.extend_from_slice(args);
        let o = lbi(&full);
        let doc: T = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(lbi_core::report::to_json(&doc), o.stdout);
    }
    same::<ParseDoc>(&["parse", "a -> b"]);
    same::<ClassifyDoc>(&["classify", "a | b"]);
    same::<EntailsDoc>(&["classify", "--entails", "p", "--system", s(&eq1)]);
    same::<IndependentDoc>(&["classify", "--independent", "p", "--system", s(&eq1)]);
}

#[test]
fn binary_exit_codes_and_streams() {
    let bin = env!("CARGO_BIN_EXE_lbi");
    let out = Command::new(bin).args(["parse", "p ->"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("offset 4"));
    let out = Command::new(bin).args(["parse", "p->q"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "p -> q\nsize: 3\natoms: p, q\n");
}
