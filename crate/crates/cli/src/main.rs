//! `graphalg`: command-line front end.
//!
//! Exit status: 0 on success, 1 when a property or decision comes out
//! false, 2 on errors.

mod dot;

use clap::{Parser, Subcommand, ValueEnum};
use graphalg::algebra::{is_aperiodic, syntactic_quotient, verify_aperiodic_report, FiniteAlgebra, TableFile};
use graphalg::decomposition::{binarise, exact_treewidth};
use graphalg::format::{graph_to_dot, parse_graph, print_graph};
use graphalg::grammar::{enumerate_language, FreeGrammar};
use graphalg::laws::{check_monad_laws, Monad};
use graphalg::mso::{cmso_equiv, encode_h, encode_v, eval_cmso, CmsoSignature, Formula, Generators, Model};
use graphalg::polynomial::FreeAlgebra;
use graphalg::vr::{cliquewidth, directed_graph, SamePortEdges, VHypergraph};
use graphalg::{Hypergraph, RankedAlphabet, Symbol};
use serde_json::{json, Value};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "graphalg", version, about = "Graph algebras, grammars, logic and decompositions")]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every random choice (decimal or 0x-prefixed hex).
    #[arg(long, global = true, default_value = "0x5eed", value_parser = parse_seed)]
    seed: u64,
    /// Write GraphViz renderings into this directory.
    #[arg(long, global = true, value_name = "DIR")]
    dot: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hyperedge replacement grammars.
    #[command(subcommand)]
    Grammar(GrammarCmd),
    /// Counting MSO over graph encodings.
    #[command(subcommand)]
    Mso(MsoCmd),
    /// Exact treewidth with a witness decomposition.
    Tw {
        graph: PathBuf,
        /// Require the sources to sit in the root bag.
        #[arg(long)]
        sourced: bool,
    },
    /// Smallest port count of a vertex replacement term building the graph.
    Cw {
        /// A `(vgraph ...)` file, or a `(graph ...)` file of binary edges.
        graph: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_arity: usize,
        #[arg(long, value_enum, default_value_t = Mode::Distinct)]
        mode: Mode,
    },
    /// Finite table algebras.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Randomised check of the monad laws.
    MonadCheck {
        #[arg(long, value_enum, default_value_t = MonadArg::H)]
        monad: MonadArg,
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
    /// Flattens a graph whose labels are graphs.
    Flatten { graph: PathBuf },
    /// Replaces each hyperedge by a vertex joined to its attachments.
    Binarise { graph: PathBuf },
}

#[derive(Subcommand)]
enum GrammarCmd {
    /// Lists the language up to an unfolded-size bound.
    Enum {
        grammar: PathBuf,
        #[arg(long, default_value_t = 10)]
        bound: usize,
    },
    /// Validates a grammar, or searches it for a graph up to `--bound`.
    Check {
        grammar: PathBuf,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        bound: usize,
    },
}

#[derive(Subcommand)]
enum MsoCmd {
    /// Evaluates a sentence (file or literal text) on an encoded graph.
    Eval {
        graph: PathBuf,
        formula: String,
        #[arg(long, value_enum, default_value_t = Encoding::H)]
        encoding: Encoding,
    },
    /// Decides CMSO equivalence of two encoded graphs.
    Equiv {
        g1: PathBuf,
        g2: PathBuf,
        #[arg(long, default_value_t = 1)]
        rank: usize,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        moduli: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Encoding::H)]
        encoding: Encoding,
        /// Use every realised atomic one-type as a generator.
        #[arg(long)]
        complete: bool,
    },
}

#[derive(Subcommand)]
enum AlgebraCmd {
    /// Checks that every element up to `--arity` has stabilising powers.
    Aperiodic {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        arity: usize,
    },
    /// Syntactic quotient of the recognised language, printed as a table.
    Minimize {
        file: PathBuf,
        #[arg(long)]
        arity: Option<usize>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Encoding {
    H,
    V,
}

#[derive(Clone, Copy, ValueEnum)]
enum MonadArg {
    H,
    V,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Distinct,
    All,
    Forbidden,
}

impl From<Mode> for SamePortEdges {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Distinct => SamePortEdges::DistinctCorners,
            Mode::All => SamePortEdges::AllPairs,
            Mode::Forbidden => SamePortEdges::Forbidden,
        }
    }
}

fn parse_seed(s: &str) -> Result<u64, String> {
    match s.strip_prefix("0x") {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    }
    .map_err(|e| e.to_string())
}

/// Outcome of a command: text and JSON renderings and whether the
/// property or decision held.
struct Report {
    text: String,
    json: Value,
    holds: bool,
}

impl Report {
    fn ok(text: String, json: Value) -> Report {
        Report { text, json, holds: true }
    }
}

type Res<T> = Result<T, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

/// Prefixes parse errors with the file they came from.
fn in_file<T>(path: &Path, r: graphalg::Result<T>) -> Res<T> {
    r.map_err(|e| format!("{}: {e}", path.display()))
}

fn load_graph(path: &Path) -> Res<Hypergraph<Symbol>> {
    in_file(path, parse_graph(&read(path)?))
}

fn load_vgraph(path: &Path) -> Res<VHypergraph<Symbol>> {
    let text = read(path)?;
    if text.trim_start().starts_with("(vgraph") {
        return in_file(path, VHypergraph::parse(&text));
    }
    let g: Hypergraph<Symbol> = in_file(path, parse_graph(&text))?;
    let mut edges = Vec::new();
    for e in g.edges() {
        match e.incidence[..] {
            [a, b] => edges.push((a, b)),
            _ => return Err(format!("{}: `{}` is not a binary edge", path.display(), e.label.name())),
        }
    }
    directed_graph(g.vertex_count(), &edges).map_err(err)
}

struct DotSink(Option<PathBuf>);

impl DotSink {
    fn write(&self, name: &str, contents: &str) -> Res<()> {
        if let Some(dir) = &self.0 {
            fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
            let path = dir.join(format!("{name}.dot"));
            fs::write(&path, contents).map_err(|e| format!("{}: {e}", path.display()))?;
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let dots = DotSink(cli.dot.clone());
    match run(&cli, &dots) {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("json"));
            } else {
                print!("{}", report.text);
            }
            if report.holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli, dots: &DotSink) -> Res<Report> {
    match &cli.command {
        Command::Grammar(GrammarCmd::Enum { grammar, bound }) => grammar_enum(grammar, *bound, dots),
        Command::Grammar(GrammarCmd::Check { grammar, graph, bound }) => grammar_check(grammar, graph.as_deref(), *bound),
        Command::Mso(MsoCmd::Eval { graph, formula, encoding }) => mso_eval(graph, formula, *encoding),
        Command::Mso(MsoCmd::Equiv { g1, g2, rank, moduli, encoding, complete }) => {
            let generators = if *complete { Generators::Complete } else { Generators::Default };
            let sig = CmsoSignature::new(*rank, moduli.iter().copied(), generators).map_err(err)?;
            mso_equiv(g1, g2, &sig, *encoding)
        }
        Command::Tw { graph, sourced } => treewidth(graph, *sourced, dots),
        Command::Cw { graph, max_arity, mode } => {
            let g = load_vgraph(graph)?;
            dots.write("graph", &g.to_dot("graph"))?;
            let found = cliquewidth(&g, *max_arity, (*mode).into()).map_err(err)?;
            let text = match found {
                Some(n) => format!("clique-width {n}\n"),
                None => format!("clique-width above {max_arity}\n"),
            };
            let json = json!({ "cliquewidth": found, "max_arity": max_arity });
            Ok(Report { text, json, holds: found.is_some() })
        }
        Command::Algebra(AlgebraCmd::Aperiodic { file, arity }) => aperiodic(file, *arity),
        Command::Algebra(AlgebraCmd::Minimize { file, arity, output }) => minimize(file, *arity, output.as_deref()),
        Command::MonadCheck { monad, cases } => {
            let monad = match monad {
                MonadArg::H => Monad::H,
                MonadArg::V => Monad::V,
            };
            let report = check_monad_laws(monad, cli.seed, *cases).map_err(err)?;
            let json = serde_json::to_value(&report).map_err(err)?;
            Ok(Report { text: report.to_string(), json, holds: report.holds() })
        }
        Command::Flatten { graph } => {
            let nested: Hypergraph<Hypergraph<Symbol>> = in_file(graph, parse_graph(&read(graph)?))?;
            let flat = nested.flatten();
            dots.write("flat", &graph_to_dot(&flat, "flat"))?;
            let text = print_graph(&flat);
            Ok(Report::ok(text.clone(), json!({ "graph": text })))
        }
        Command::Binarise { graph } => {
            let b = binarise(&load_graph(graph)?);
            dots.write("binarised", &graph_to_dot(&b, "binarised"))?;
            let text = print_graph(&b);
            Ok(Report::ok(text.clone(), json!({ "graph": text })))
        }
    }
}

fn load_grammar(path: &Path) -> Res<FreeGrammar> {
    in_file(path, FreeGrammar::parse(&read(path)?))
}

fn grammar_enum(path: &Path, bound: usize, dots: &DotSink) -> Res<Report> {
    let g = load_grammar(path)?;
    let items = enumerate_language(&g, &FreeAlgebra, bound).map_err(err)?;
    let mut text = format!("{} graphs up to size {bound}\n", items.len());
    let mut list = Vec::new();
    for (i, item) in items.iter().enumerate() {
        let v = &item.value;
        text.push_str(&format!(
            "#{i}: size {}, {} vertices, {} edges\n{}",
            item.size,
            v.vertex_count(),
            v.edges().len(),
            print_graph(v)
        ));
        dots.write(&format!("item-{i}"), &graph_to_dot(v, &format!("item-{i}")))?;
        dots.write(&format!("derivation-{i}"), &dot::derivation(&item.derivation, &g))?;
        list.push(json!({
            "size": item.size,
            "vertices": v.vertex_count(),
            "edges": v.edges().len(),
            "graph": print_graph(v),
            "derivation": item.derivation,
        }));
    }
    Ok(Report::ok(text, json!({ "bound": bound, "items": list })))
}

fn grammar_check(path: &Path, graph: Option<&Path>, bound: usize) -> Res<Report> {
    let g = load_grammar(path)?;
    let report = g.validate();
    let mut text = String::from("grammar is valid\n");
    for w in &report.warnings {
        text.push_str(&format!("warning: {w}\n"));
    }
    let Some(graph) = graph else {
        return Ok(Report::ok(text, json!({ "valid": true, "warnings": report.warnings })));
    };
    let target = load_graph(graph)?;
    let items = enumerate_language(&g, &FreeAlgebra, bound).map_err(err)?;
    let hit = items.iter().find(|i| i.value.is_isomorphic(&target));
    match hit {
        Some(item) => text.push_str(&format!("derived with unfolded size {}\n", item.size)),
        None => text.push_str(&format!("not derived up to size {bound}\n")),
    }
    let json = json!({
        "valid": true,
        "warnings": report.warnings,
        "derived": hit.is_some(),
        "derivation": hit.map(|i| &i.derivation),
    });
    Ok(Report { text, json, holds: hit.is_some() })
}

fn encode(path: &Path, encoding: Encoding, extra: &[Symbol]) -> Res<(Model, Vec<Symbol>)> {
    match encoding {
        Encoding::H => {
            let g = load_graph(path)?;
            let used = g.used_symbols();
            let alph = RankedAlphabet::from_used(used.iter().chain(extra).cloned()).map_err(err)?;
            Ok((encode_h(&g, &alph).map_err(err)?, used))
        }
        Encoding::V => {
            let g = load_vgraph(path)?;
            let used: Vec<Symbol> = g.labels().to_vec();
            let alph = RankedAlphabet::from_used(used.iter().chain(extra).cloned()).map_err(err)?;
            Ok((encode_v(&g, &alph).map_err(err)?, used))
        }
    }
}

fn mso_eval(graph: &Path, formula: &str, encoding: Encoding) -> Res<Report> {
    let text = if Path::new(formula).is_file() { read(Path::new(formula))? } else { formula.to_string() };
    let f = Formula::parse(&text).map_err(err)?;
    let (m, _) = encode(graph, encoding, &[])?;
    let value = eval_cmso(&f, &m).map_err(err)?;
    let json = json!({ "formula": f.to_string(), "value": value, "universe": m.size() });
    Ok(Report { text: format!("{value}\n"), json, holds: value })
}

fn mso_equiv(g1: &Path, g2: &Path, sig: &CmsoSignature, encoding: Encoding) -> Res<Report> {
    // Both encodings must share a vocabulary, so each sees the other's labels.
    let (_, used1) = encode(g1, encoding, &[])?;
    let (_, used2) = encode(g2, encoding, &[])?;
    let (m1, _) = encode(g1, encoding, &used2)?;
    let (m2, _) = encode(g2, encoding, &used1)?;
    let equivalent = cmso_equiv(&m1, &m2, sig).map_err(err)?;
    let moduli: Vec<usize> = sig.moduli.iter().copied().collect();
    let text = format!(
        "{} at rank {} with moduli {moduli:?}\n",
        if equivalent { "equivalent" } else { "not equivalent" },
        sig.rank
    );
    let json = json!({ "equivalent": equivalent, "rank": sig.rank, "moduli": moduli });
    Ok(Report { text, json, holds: equivalent })
}

fn treewidth(path: &Path, sourced: bool, dots: &DotSink) -> Res<Report> {
    let g = load_graph(path)?;
    let tw = exact_treewidth(&g, sourced).map_err(err)?;
    dots.write("graph", &graph_to_dot(&g, "graph"))?;
    dots.write("decomposition", &dot::decomposition(&tw.decomposition))?;
    let text = format!("treewidth {}\n{}", tw.width, tw.decomposition.to_text());
    let json = json!({ "width": tw.width, "sourced": sourced, "decomposition": tw.decomposition.to_text() });
    Ok(Report::ok(text, json))
}

fn load_table(path: &Path) -> Res<TableFile> {
    in_file(path, TableFile::parse(&read(path)?))
}

fn aperiodic(path: &Path, arity: usize) -> Res<Report> {
    let file = load_table(path)?;
    let report = is_aperiodic(&*file.algebra, arity).map_err(err)?;
    let verified = verify_aperiodic_report(&*file.algebra, &report).map_err(err)?;
    let mut text = format!("{}\n", if report.aperiodic { "aperiodic" } else { "not aperiodic" });
    if let Some(w) = &report.witness {
        let name = file.algebra.element_name(w.element);
        text.push_str(&format!(
            "witness: {name} (arity {}): power {} repeats with period {}\n",
            w.element.arity, w.start, w.period
        ));
    }
    text.push_str(&format!("report verified: {verified}\n"));
    if !verified {
        return Err("the aperiodicity report does not verify".into());
    }
    let json = json!({ "report": report, "verified": verified });
    Ok(Report { text, json, holds: report.aperiodic })
}

fn minimize(path: &Path, arity: Option<usize>, output: Option<&Path>) -> Res<Report> {
    let file = load_table(path)?;
    let bound = arity.unwrap_or(file.algebra.arity_cap());
    let needed = file.alphabet.max_arity();
    if bound < needed {
        return Err(format!("--arity must be at least {needed}, the largest symbol arity"));
    }
    let q = syntactic_quotient(&file.language().map_err(err)?, bound).map_err(err)?;
    let name = format!("{}-min", file.algebra.name());
    let recogniser = q.language.recogniser().map_err(err)?;
    let table = TableFile::from_recogniser(&name, &recogniser).map_err(err)?.to_text();
    let mut text = format!("sizes {:?} -> {:?}\n", q.base_sizes, q.sizes);
    match output {
        Some(out) => fs::write(out, &table).map_err(|e| format!("{}: {e}", out.display()))?,
        None => text.push_str(&table),
    }
    let json = json!({ "base_sizes": q.base_sizes, "sizes": q.sizes, "table": table });
    Ok(Report::ok(text, json))
}
