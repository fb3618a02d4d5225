//! GraphViz renderings of derivations and tree decompositions.

use graphalg::decomposition::TreeDecomposition;
use graphalg::grammar::{DerivationTree, FreeGrammar};
use std::fmt::Write as _;

pub fn derivation(d: &DerivationTree, g: &FreeGrammar) -> String {
    let mut out = String::from("digraph derivation {\n  node [shape=box];\n");
    let mut next = 0;
    node(d, g, &mut next, &mut out);
    out.push_str("}\n");
    out
}

fn node(d: &DerivationTree, g: &FreeGrammar, next: &mut usize, out: &mut String) -> usize {
    let id = *next;
    *next += 1;
    let lhs = g.rules().get(d.rule).map(|r| r.lhs.name().to_string()).unwrap_or_default();
    let _ = writeln!(out, "  d{id} [label=\"{lhs} (rule {})\"];", d.rule);
    for (var, child) in &d.children {
        let c = node(child, g, next, out);
        let _ = writeln!(out, "  d{id} -> d{c} [label=\"{var}\"];");
    }
    id
}

pub fn decomposition(t: &TreeDecomposition) -> String {
    let mut out = String::from("graph decomposition {\n  node [shape=box];\n");
    for (i, n) in t.nodes.iter().enumerate() {
        let bag: Vec<String> = n.bag.iter().map(usize::to_string).collect();
        let root = if i == t.root { ", style=bold" } else { "" };
        let _ = writeln!(out, "  b{i} [label=\"{{{}}}\"{root}];", bag.join(", "));
        for c in &n.children {
            let _ = writeln!(out, "  b{i} -- b{c};");
        }
    }
    out.push_str("}\n");
    out
}
