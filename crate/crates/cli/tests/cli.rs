use graphalg::algebra::TableFile;
use graphalg::format::{parse_graph, print_graph};
use graphalg::grammar::FreeGrammar;
use graphalg::{Hypergraph, Symbol};
use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphalg")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn exponential_grammar_lengths() {
    let o = run(&["--json", "grammar", "enum", &data("exp.grammar"), "--bound", "15"]);
    assert_eq!(o.status.code(), Some(0));
    let edges: Vec<u64> = json(&o)["items"].as_array().unwrap().iter().map(|i| i["edges"].as_u64().unwrap()).collect();
    assert_eq!(edges, [1, 2, 4, 8]);
}

#[test]
fn grammar_membership() {
    let o = run(&["grammar", "check", &data("cycles.grammar"), "--graph", &data("triangle.graph")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("derived with unfolded size 3"));
    let o = run(&["grammar", "check", &data("cycles.grammar"), "--graph", &data("path.graph")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn aperiodicity_exit_codes() {
    let o = run(&["algebra", "aperiodic", &data("mod2.alg"), "--arity", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness"));
    let o = run(&["--json", "algebra", "aperiodic", &data("atleast2.alg"), "--arity", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["verified"], true);
}

#[test]
fn minimisation_shrinks_the_padded_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("min.alg");
    let o = run(&["--json", "algebra", "minimize", &data("padded.alg"), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let j = json(&o);
    assert_eq!(j["base_sizes"], serde_json::json!([4, 4, 4]));
    assert_eq!(j["sizes"], serde_json::json!([2, 2, 2]));
    let min = TableFile::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(min.sizes(), [2, 2, 2]);
}

#[test]
fn monad_check_passes() {
    for monad in ["h", "v"] {
        let o = run(&["monad-check", "--monad", monad, "--seed", "7", "--cases", "50"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
}

#[test]
fn reports_are_deterministic() {
    let args = ["--json", "--seed", "0x2a", "monad-check", "--monad", "h", "--cases", "20"];
    assert_eq!(stdout(&run(&args)), stdout(&run(&args)));
}

#[test]
fn mso_eval_and_equiv() {
    let even = data("even-edges.mso");
    assert_eq!(run(&["mso", "eval", &data("square.graph"), &even]).status.code(), Some(0));
    assert_eq!(run(&["mso", "eval", &data("triangle.graph"), &even]).status.code(), Some(1));
    let literal = "(exists x (edge x))";
    assert_eq!(run(&["mso", "eval", &data("triangle.graph"), literal, "--encoding", "h"]).status.code(), Some(0));
    let same = run(&["mso", "equiv", &data("square.graph"), &data("square.graph"), "--rank", "2", "--moduli", "2,3"]);
    assert_eq!(same.status.code(), Some(0));
    let parity = run(&["mso", "equiv", &data("triangle.graph"), &data("square.graph"), "--rank", "0", "--moduli", "2"]);
    assert_eq!(parity.status.code(), Some(1));
}

#[test]
fn treewidth_and_dot_output() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--json", "--dot", dir.path().to_str().unwrap(), "tw", &data("square.graph")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["width"], 2);
    for f in ["graph.dot", "decomposition.dot"] {
        let text = std::fs::read_to_string(dir.path().join(f)).unwrap();
        assert!(text.ends_with("}\n"), "{f}");
    }
}

#[test]
fn cliquewidth_of_a_triangle() {
    let o = run(&["--json", "cw", &data("triangle.graph"), "--max-arity", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let w = json(&o)["cliquewidth"].as_u64().unwrap();
    assert!((2..=3).contains(&w));
    assert_eq!(run(&["cw", &data("triangle.graph"), "--max-arity", "1"]).status.code(), Some(1));
}

#[test]
fn flatten_and_binarise() {
    let o = run(&["flatten", &data("nested.graph")]);
    assert_eq!(o.status.code(), Some(0));
    let g: Hypergraph<Symbol> = parse_graph(&stdout(&o)).unwrap();
    assert_eq!((g.vertex_count(), g.edges().len()), (4, 3));
    let o = run(&["binarise", &data("path.graph")]);
    let b: Hypergraph<Symbol> = parse_graph(&stdout(&o)).unwrap();
    assert_eq!((b.vertex_count(), b.edges().len()), (5, 4));
}

#[test]
fn errors_exit_with_two() {
    let o = run(&["tw", &data("no-such-file.graph")]);
    assert_eq!(o.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.graph");
    std::fs::write(&bad, "(graph (vertices 0)\n  (edges (0 e 0 9)))").unwrap();
    let o = run(&["tw", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let msg = String::from_utf8(o.stderr).unwrap();
    assert!(msg.contains("2:17"), "{msg}");
    assert_eq!(run(&["tw"]).status.code(), Some(2));
}

#[test]
fn data_files_are_canonical() {
    for g in ["triangle.graph", "square.graph", "path.graph"] {
        let text = std::fs::read_to_string(data(g)).unwrap();
        let parsed: Hypergraph<Symbol> = parse_graph(&text).unwrap();
        assert_eq!(print_graph(&parsed), text, "{g}");
    }
    for g in ["exp.grammar", "cycles.grammar", "balanced.grammar", "trees.grammar"] {
        let text = std::fs::read_to_string(data(g)).unwrap();
        assert_eq!(FreeGrammar::parse(&text).unwrap().to_text(), text, "{g}");
    }
    for a in ["mod2.alg", "atleast2.alg", "padded.alg"] {
        let text = std::fs::read_to_string(data(a)).unwrap();
        assert_eq!(TableFile::parse(&text).unwrap().to_text(), text, "{a}");
    }
}
