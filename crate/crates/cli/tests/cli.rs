use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use shaclcheck_core::eval::is_faithful;
use shaclcheck_core::io::{parse_counterexample, parse_shapes};
use shaclcheck_core::SymbolTable;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shaclcheck"))
        .args(args)
        .env_remove("SHACLCHECK_BOUND")
        .output()
        .expect("binary runs")
}

fn shaclcheck(args: &[&str]) -> (i32, String) {
    let out = run(args);
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let (code, text) = shaclcheck(&all);
    (
        code,
        serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}")),
    )
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

#[test]
fn classify_reports_the_fragment_and_a_witness() {
    let (code, v) = json(&["classify", &path("s1.shapes")]);
    assert_eq!(code, 0);
    assert_eq!(v["fragment"], "L-restricted");
    assert_eq!(v["witness"]["shape"], "PainterShape");
}

#[test]
fn validate_prints_the_assignment() {
    let (code, text) = shaclcheck(&["validate", &path("s1.shapes"), &path("painting.nt")]);
    assert_eq!(code, 0, "{text}");
    assert!(text.starts_with("conforms"));
    assert!(
        text.contains("ASSIGN <picasso> PainterShape CubistShape"),
        "{text}"
    );
    assert!(text.contains("ASSIGN <guernica> PaintingShape"), "{text}");
    let (code, v) = json(&["conforms", &path("s1.shapes"), &path("painting.nt")]);
    assert_eq!((code, v["verdict"].as_str()), (0, Some("conforms")));
}

#[test]
fn missing_target_nodes_do_not_conform() {
    let (code, text) = shaclcheck(&["conforms", &path("missing_target.shapes"), &path("g1.nt")]);
    assert_eq!(code, 1);
    assert!(text.contains("target node alice missing"), "{text}");
    let (code, _) = shaclcheck(&[
        "--original-semantics",
        "conforms",
        &path("missing_target.shapes"),
        &path("g1.nt"),
    ]);
    assert_eq!(code, 0);
}

#[test]
fn translate_matches_the_golden_file() {
    let (code, text) = shaclcheck(&["translate", &path("s1.shapes")]);
    assert_eq!(code, 0);
    assert_eq!(text, std::fs::read_to_string(data("s1.kb")).unwrap());
    let (code, v) = json(&["translate", "--format", "dl-exchange", &path("s1.shapes")]);
    assert_eq!(code, 0);
    assert!(v["output"].as_str().unwrap().contains("EquivalentClasses"));
}

#[test]
fn counterexamples_verify_independently() {
    let (code, v) = json(&[
        "contains",
        &path("s1.shapes"),
        "CubistShape",
        "PainterShape",
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "not-contained");
    let block = v["counterexample"]["block"].as_str().unwrap();
    let mut t = SymbolTable::new();
    let shapes = parse_shapes(&std::fs::read_to_string(data("s1.shapes")).unwrap(), &mut t)
        .unwrap()
        .shapes;
    let (g, sigma) = parse_counterexample(block, &shapes, &mut t).unwrap();
    assert!(is_faithful(&g, &shapes, &sigma).unwrap());
    let w = t
        .lookup_node(v["counterexample"]["witness"].as_str().unwrap())
        .unwrap();
    assert!(sigma.has(w, t.lookup_shape("CubistShape").unwrap()));
    assert!(!sigma.has(w, t.lookup_shape("PainterShape").unwrap()));
}

#[test]
fn containment_verdicts_and_exit_codes() {
    let s1 = path("s1.shapes");
    let (code, v) = json(&["contains", &s1, "PaintingShape", "PaintingShape"]);
    assert_eq!((code, v["provenance"].as_str()), (0, Some("reflexive")));
    let (code, _) = json(&[
        "refute",
        &s1,
        "PaintingShape",
        "PaintingShape",
        "--bound",
        "2",
    ]);
    assert_eq!(code, 2);
    // Inverse paths in the ambient shapes put the pair outside the decided fragment.
    let (code, v) = json(&[
        "encode-gci",
        &s1,
        "(>= 2 p top)",
        "(>= 1 p top)",
        "--bound",
        "2",
    ]);
    assert_eq!((code, v["verdict"].as_str()), (2, Some("unknown")));
    let empty = path("empty.shapes");
    let (code, v) = json(&["encode-gci", &empty, "(>= 2 p top)", "(>= 1 p top)"]);
    assert_eq!((code, v["guarantee"].as_str()), (0, Some("complete")));
    let (code, _) = json(&["encode-gci", &empty, "top", "(node v)"]);
    assert_eq!(code, 1);
}

#[test]
fn bad_input_exits_with_three() {
    let (code, v) = json(&[
        "contains",
        &path("s1.shapes"),
        "NoSuchShape",
        "PainterShape",
    ]);
    assert_eq!(code, 3);
    assert_eq!(v["verdict"], "error");
    assert_eq!(shaclcheck(&["classify", &path("missing.shapes")]).0, 3);
    assert_eq!(shaclcheck(&["frobnicate"]).0, 3);
    assert_eq!(shaclcheck(&["--help"]).0, 0);
}
