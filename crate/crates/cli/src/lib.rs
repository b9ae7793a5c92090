//! Command-line front end: reads graph documents, runs the identifiability
//! checks and writes JSON documents to stdout.
//!
//! Exit codes: 0 success with a positive verdict, 3 negative verdict, 1 usage
//! error, 2 input error, 4 enumeration budget exceeded, 5 internal failure.
//! Errors go to stderr as one line of JSON.

pub mod document;
pub mod dot;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use netident::graph::{constrained_path_set_exists, max_vertex_disjoint_paths, DEFAULT_BUDGET};
use netident::identify::{identifiable_graph, identifiable_node, CheckOptions};
use netident::oracle::{construct_counterexample, lift_counterexample, rank_trials, DEFAULT_TRIALS};
use netident::simplification::{simplify, OrderPolicy};
use netident::{Graph, VertexSet};
use serde::Serialize;

use document::{ErrorDocument, GraphDocument, PathsDocument, PathsInputs, VerdictDocument, VerdictInputs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NEGATIVE: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

/// Environment variable supplying the seed when `--seed` is absent.
pub const SEED_VAR: &str = "NETIDENT_SEED";

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] netident::Error),
}

impl CliError {
    fn kind(&self) -> &'static str {
        use netident::Error as E;
        match self {
            CliError::Usage(_) => "usage",
            CliError::Input(_) => "input",
            CliError::Core(e) => match e {
                E::Input(_) | E::Dimension(_) | E::DivisionByZero | E::NotAdmissible(_) => "input",
                E::Precondition(_) => "precondition",
                E::BudgetExceeded { .. } => "budget_exceeded",
                E::ConstructionFailed { .. } => "construction_failed",
                E::Singular | E::Internal(_) => "internal",
            },
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "usage" => EXIT_USAGE,
            "input" | "precondition" => EXIT_INPUT,
            "budget_exceeded" => EXIT_BUDGET,
            _ => EXIT_INTERNAL,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "netident", version, about = "Global identifiability of dynamical networks from their graph")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the simplification process and print the derivation.
    Derive {
        #[arg(long)]
        graph: PathBuf,
        /// Anchor set U, e.g. "2,3".
        #[arg(long, value_parser = parse_ids)]
        anchors: Ids,
        /// Measured set W.
        #[arg(long, value_parser = parse_ids)]
        measured: Ids,
        /// "det" or "seed:N".
        #[arg(long, default_value = "det", value_parser = parse_order)]
        order: OrderPolicy,
        /// Also write the derived graph as Graphviz DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Decide identifiability of the outgoing column of one node.
    CheckNode {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        node: usize,
        #[arg(long, value_parser = parse_ids)]
        measured: Ids,
        /// Attach a counterexample matrix to a negative verdict.
        #[arg(long)]
        counterexample: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Decide identifiability of every node.
    CheckGraph {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = parse_ids)]
        measured: Ids,
        #[arg(long)]
        counterexample: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Vertex-disjoint paths between two sets.
    Paths {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = parse_ids)]
        from: Ids,
        #[arg(long, value_parser = parse_ids)]
        to: Ids,
        /// Look for a constrained set of paths instead of a maximum one.
        #[arg(long)]
        constrained: bool,
        /// Number of paths for the constrained search; defaults to |from|.
        #[arg(long, requires = "constrained")]
        m: Option<usize>,
        /// Maximum number of endpoint pairs examined.
        #[arg(long, requires = "constrained")]
        budget: Option<u128>,
    },
    /// Rank of a transfer block over sampled admissible matrices.
    Oracle {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = parse_ids)]
        rows: Ids,
        #[arg(long, value_parser = parse_ids)]
        cols: Ids,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Rank-deficient admissible matrix for a node that is not identifiable.
    Counterexample {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        node: usize,
        #[arg(long, value_parser = parse_ids)]
        measured: Ids,
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// 1-based ids as given on the command line.
#[derive(Clone, Debug)]
struct Ids(Vec<usize>);

fn parse_ids(s: &str) -> Result<Ids, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| format!("{t:?} is not a vertex id")))
        .collect::<Result<_, _>>()
        .map(Ids)
}

fn parse_order(s: &str) -> Result<OrderPolicy, String> {
    if s == "det" {
        return Ok(OrderPolicy::Deterministic);
    }
    s.strip_prefix("seed:")
        .and_then(|n| n.parse().ok())
        .map(OrderPolicy::Seeded)
        .ok_or_else(|| format!("expected \"det\" or \"seed:N\", got {s:?}"))
}

/// Runs the tool on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let message = e.render().to_string();
            let first = message.lines().next().unwrap_or_default().trim_start_matches("error: ");
            return report(err, &CliError::Usage(first.to_string()));
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => report(err, &e),
    }
}

fn report(err: &mut dyn Write, e: &CliError) -> i32 {
    let doc = ErrorDocument {
        error: e.kind().to_string(),
        message: e.to_string(),
        exit_code: e.exit_code(),
    };
    let _ = writeln!(err, "{}", serde_json::to_string(&doc).expect("error documents serialize"));
    doc.exit_code
}

/// Writes `doc` as one line of JSON. A closed pipe is not an error.
fn emit<T: Serialize>(out: &mut dyn Write, doc: &T) -> Result<(), CliError> {
    let text = serde_json::to_string(doc).map_err(|e| CliError::Input(e.to_string()))?;
    match writeln!(out, "{text}").and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Input(format!("writing output: {e}"))),
        _ => Ok(()),
    }
}

fn verdict_code(positive: bool) -> i32 {
    if positive {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

fn load(path: &Path) -> Result<(GraphDocument, Graph), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("reading {}: {e}", path.display())))?;
    let doc = GraphDocument::parse(&text)?;
    let graph = doc.graph()?;
    Ok((doc, graph))
}

fn vertex_set(g: &Graph, ids: &Ids) -> Result<VertexSet, CliError> {
    let set = VertexSet::one_based(&ids.0)?;
    g.check_set(&set)?;
    Ok(set)
}

fn vertex(g: &Graph, id: usize) -> Result<usize, CliError> {
    let v = id
        .checked_sub(1)
        .ok_or_else(|| CliError::Input("vertex ids are 1-based".into()))?;
    g.check_vertex(v)?;
    Ok(v)
}

/// `--seed`, else the environment variable, else 0.
fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_VAR) {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{SEED_VAR}={text:?} is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Derive {
            graph,
            anchors,
            measured,
            order,
            dot,
        } => {
            let (doc, g) = load(&graph)?;
            let u = vertex_set(&g, &anchors)?;
            let w = vertex_set(&g, &measured)?;
            let d = simplify(&g, &u, &w, order)?;
            if let Some(path) = dot {
                let text = dot::to_dot(&d.derived_graph, &d.derived_set, &doc.labels()?);
                std::fs::write(&path, text)
                    .map_err(|e| CliError::Input(format!("writing {}: {e}", path.display())))?;
            }
            emit(out, &d)?;
            Ok(verdict_code(d.includes_anchor()))
        }
        Command::CheckNode {
            graph,
            node,
            measured,
            counterexample,
            seed,
        } => {
            let (_, g) = load(&graph)?;
            let i = vertex(&g, node)?;
            let c = vertex_set(&g, &measured)?;
            let seed = resolve_seed(seed)?;
            let opts = CheckOptions {
                with_counterexample: counterexample,
                seed,
            };
            let v = identifiable_node(&g, i, &c, opts)?;
            emit(
                out,
                &VerdictDocument {
                    command: "check-node".into(),
                    inputs: VerdictInputs {
                        graph: graph.display().to_string(),
                        node: Some(node),
                        measured: c,
                        counterexample,
                    },
                    verdict: v.identifiable,
                    certificate: v.certificate,
                    nodes: Vec::new(),
                    seed,
                    version: VERSION.into(),
                },
            )?;
            Ok(verdict_code(v.identifiable))
        }
        Command::CheckGraph {
            graph,
            measured,
            counterexample,
            seed,
        } => {
            let (_, g) = load(&graph)?;
            let c = vertex_set(&g, &measured)?;
            let seed = resolve_seed(seed)?;
            let opts = CheckOptions {
                with_counterexample: counterexample,
                seed,
            };
            let v = identifiable_graph(&g, &c, opts)?;
            emit(
                out,
                &VerdictDocument {
                    command: "check-graph".into(),
                    inputs: VerdictInputs {
                        graph: graph.display().to_string(),
                        node: None,
                        measured: c,
                        counterexample,
                    },
                    verdict: v.identifiable,
                    certificate: v.certificate,
                    nodes: v.checked_nodes,
                    seed,
                    version: VERSION.into(),
                },
            )?;
            Ok(verdict_code(v.identifiable))
        }
        Command::Paths {
            graph,
            from,
            to,
            constrained,
            m,
            budget,
        } => {
            let (_, g) = load(&graph)?;
            let from = vertex_set(&g, &from)?;
            let to = vertex_set(&g, &to)?;
            let mut doc = PathsDocument {
                command: "paths".into(),
                inputs: PathsInputs {
                    graph: graph.display().to_string(),
                    from: from.clone(),
                    to: to.clone(),
                    constrained,
                    m,
                    budget,
                },
                count: None,
                exists: None,
                pairs_examined: None,
                witness: None,
                version: VERSION.into(),
            };
            let code = if constrained {
                let m = m.unwrap_or(from.len());
                let outcome = constrained_path_set_exists(&g, &from, &to, m, budget.unwrap_or(DEFAULT_BUDGET))?;
                doc.exists = Some(outcome.exists);
                doc.pairs_examined = Some(outcome.pairs_examined);
                doc.witness = outcome.witness;
                verdict_code(outcome.exists)
            } else {
                let (count, witness) = max_vertex_disjoint_paths(&g, &from, &to)?;
                doc.count = Some(count);
                doc.witness = Some(witness);
                EXIT_OK
            };
            emit(out, &doc)?;
            Ok(code)
        }
        Command::Oracle {
            graph,
            rows,
            cols,
            trials,
            seed,
        } => {
            let (_, g) = load(&graph)?;
            let w = vertex_set(&g, &rows)?;
            let u = vertex_set(&g, &cols)?;
            let report = rank_trials(&g, &u, &w, trials, resolve_seed(seed)?)?;
            emit(out, &report)?;
            Ok(verdict_code(report.all_full_rank()))
        }
        Command::Counterexample {
            graph,
            node,
            measured,
            seed,
        } => {
            let (_, g) = load(&graph)?;
            let i = vertex(&g, node)?;
            let c = vertex_set(&g, &measured)?;
            let seed = resolve_seed(seed)?;
            let u = g.out_set(i);
            let d = simplify(&g, &u, &c, OrderPolicy::Deterministic)?;
            if d.includes_anchor() {
                return Err(netident::Error::Precondition(format!(
                    "node {node} is identifiable from the measured set, so no counterexample exists"
                ))
                .into());
            }
            let derived = construct_counterexample(&d, &u, seed)?;
            let lifted = lift_counterexample(&d, &derived, seed.wrapping_add(1))?;
            emit(out, &lifted)?;
            Ok(EXIT_OK)
        }
    }
}
