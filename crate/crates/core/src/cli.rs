//! The `bclique` command line. Every command prints one JSON document
//! (`schema_version` 1) on stdout, except `gen` without `--out`, which prints
//! the edge list itself.
//!
//! Exit codes: 0 on success, 1 on protocol errors or failed verification,
//! 2 on usage errors, unreadable files and malformed graphs.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::graph::{
    components_and_forest, core_peel, gen_graph, is_spanning_forest, load_graph, serialize_graph, tilde_global, Graph,
    GraphKind,
};
use crate::protocols::{connectivity_one_round_r, prune_one_round, spanning_forest_multiround, Epsilon, ProtocolError};
use crate::sketch::{ceil_log2, SketchParams};
use crate::verify::{run_suite, Suite};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "bclique", version, about = "Deterministic broadcast congested clique protocols")]
struct Cli {
    /// Add wall-clock time to the report (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sketch parameters (p, xbar) for dimension n and sparsity d.
    Params {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    /// One-round d-pruning.
    Prune {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        d: usize,
        /// Include every broadcast message in the report.
        #[arg(long)]
        transcript: bool,
    },
    /// Multi-round spanning forest; eps as a decimal or a fraction a/b.
    Components {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        transcript: bool,
    },
    /// One-round connectivity from radius-r views.
    OneRound {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        transcript: bool,
    },
    /// Generate a graph as an edge list.
    Gen {
        /// path, cycle, complete, star, gnp, random_forest, random_degenerate
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Generator parameter: edge probability for gnp, bound for random_degenerate.
        #[arg(long = "param")]
        params: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the oracle-equivalence suites.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::Small)]
        suite: SuiteArg,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Small,
    Full,
}

/// What a command produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String, String),
    Protocol(ProtocolError),
}

impl From<ProtocolError> for Failure {
    fn from(e: ProtocolError) -> Self {
        Failure::Protocol(e)
    }
}

fn envelope(command: &str) -> Value {
    json!({ "schema_version": SCHEMA_VERSION, "command": command })
}

fn render(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("reports serialize");
    s.push('\n');
    s
}

fn read_graph(path: &PathBuf) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage("IoError".into(), format!("{}: {e}", path.display())))?;
    load_graph(&text).map_err(|e| Failure::Usage("GraphError".into(), format!("{}: {e}", path.display())))
}

fn bits(x: usize) -> u64 {
    ceil_log2(&(x as u64).into())
}

fn sketch_json(params: &SketchParams) -> Value {
    json!({
        "n": params.n(),
        "d": params.d(),
        "p": params.p().to_string(),
        "xbar": params.xbar().to_string(),
        "log2_p": params.modulus_bits(),
    })
}

/// Runs one command line (including the program name) in-process.
pub fn run_command<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let name = command_name(&cli.command);
    let started = Instant::now();
    match execute(cli.command) {
        Ok((mut doc, ok)) => {
            if let Some(doc) = doc.as_object_mut().filter(|_| cli.timing) {
                doc.insert("wall_time_ms".into(), json!(started.elapsed().as_secs_f64() * 1e3));
            }
            let stdout = if doc.is_string() {
                doc.as_str().unwrap().to_string()
            } else {
                render(&doc)
            };
            Outcome {
                code: if ok { 0 } else { 1 },
                stdout,
                stderr: String::new(),
            }
        }
        Err(failure) => {
            let (code, kind, message) = match failure {
                Failure::Usage(kind, message) => (2, kind, message),
                Failure::Protocol(e) => (1, e.kind().to_string(), e.to_string()),
            };
            let mut doc = envelope(name);
            doc["error"] = json!({ "kind": kind, "message": message });
            Outcome {
                code,
                stdout: render(&doc),
                stderr: format!("error: {message}\n"),
            }
        }
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Params { .. } => "params",
        Command::Prune { .. } => "prune",
        Command::Components { .. } => "components",
        Command::OneRound { .. } => "one-round",
        Command::Gen { .. } => "gen",
        Command::Verify { .. } => "verify",
    }
}

/// Returns the report and whether every check in it agreed with the oracles.
fn execute(command: Command) -> Result<(Value, bool), Failure> {
    match command {
        Command::Params { n, d } => {
            let params = SketchParams::build(n, d).map_err(ProtocolError::from)?;
            let mut doc = envelope("params");
            doc["sketch"] = sketch_json(&params);
            Ok((doc, true))
        }

        Command::Prune { graph, d, transcript } => {
            let g = read_graph(&graph)?;
            let run = prune_one_round(&g, d)?;
            let oracle = core_peel(&g, d);
            let agree = run.result.sequence == oracle.sequence && run.result.remaining == oracle.remaining;
            let mut doc = envelope("prune");
            doc["protocol"] = json!("d_pruning");
            doc["parameters"] = json!({ "n": g.n(), "d": d });
            doc["sketch"] = sketch_json(&run.params);
            doc["rounds_used"] = json!(run.transcript.rounds_used());
            doc["per_node_bits"] = json!(run.transcript.per_node_bits());
            doc["bit_budget"] = json!(bits(g.n()) + run.params.modulus_bits());
            doc["total_bits"] = json!(run.transcript.total_bits());
            doc["result"] = run.result.to_json();
            doc["oracle_agreement"] = json!(agree);
            if transcript {
                doc["transcript"] = run.transcript.to_json();
            }
            Ok((doc, agree))
        }

        Command::Components { graph, eps, transcript } => {
            let g = read_graph(&graph)?;
            let eps: Epsilon = eps.parse().map_err(|e: ProtocolError| Failure::Usage("BadEpsilon".into(), e.to_string()))?;
            let run = spanning_forest_multiround(&g, eps)?;
            let oracle = components_and_forest(&g);
            let agree = run.components.labels == oracle.labels && is_spanning_forest(&g, &run.components.forest);
            let mut doc = envelope("components");
            doc["protocol"] = json!("spanning_forest");
            doc["parameters"] = json!({
                "n": g.n(),
                "eps": eps.to_string(),
                "round_budget": eps.rounds(),
                "neighbor_cap": run.neighbor_cap,
            });
            doc["rounds_used"] = json!(run.transcript.rounds_used());
            doc["per_node_bits"] = json!(run.transcript.per_node_bits());
            doc["bit_budget"] = json!(bits(g.n() + 1) + run.neighbor_cap as u64 * bits(g.n()));
            doc["total_bits"] = json!(run.transcript.total_bits());
            doc["component_count"] = json!(run.components.count());
            doc["labels"] = json!(run.components.labels);
            doc["forest"] = json!(run.components.forest);
            doc["active_per_round"] = json!(run.active_per_round);
            doc["oracle_agreement"] = json!(agree);
            if transcript {
                doc["transcript"] = run.transcript.to_json();
            }
            Ok((doc, agree))
        }

        Command::OneRound { graph, r, transcript } => {
            let g = read_graph(&graph)?;
            if r == 0 {
                return Err(Failure::Usage("BadRadius".into(), "r must be at least 1".into()));
            }
            let run = connectivity_one_round_r(&g, r)?;
            let oracle = components_and_forest(&g);
            let global = tilde_global(&g, r);
            let agree = run.components.labels == oracle.labels
                && run.tilde == global.tilde
                && is_spanning_forest(&g, &run.components.forest);
            let mut doc = envelope("one-round");
            doc["protocol"] = json!("radius_connectivity");
            doc["parameters"] = json!({ "n": g.n(), "r": r, "s": run.s });
            doc["sketch"] = sketch_json(&run.params);
            doc["rounds_used"] = json!(run.transcript.rounds_used());
            doc["per_node_bits"] = json!(run.transcript.per_node_bits());
            doc["bit_budget"] = json!(bits(g.n()) + run.params.modulus_bits());
            doc["total_bits"] = json!(run.transcript.total_bits());
            doc["removed_edges"] = json!(global.removed);
            doc["component_count"] = json!(run.components.count());
            doc["labels"] = json!(run.components.labels);
            doc["forest"] = json!(run.components.forest);
            doc["oracle_agreement"] = json!(agree);
            if transcript {
                doc["transcript"] = run.transcript.to_json();
            }
            Ok((doc, agree))
        }

        Command::Gen { kind, n, seed, params, out } => {
            let g = GraphKind::parse(&kind, &params)
                .and_then(|k| gen_graph(k, n, seed))
                .map_err(|e| Failure::Usage("GraphError".into(), e.to_string()))?;
            let text = serialize_graph(&g);
            match out {
                None => Ok((Value::String(text), true)),
                Some(path) => {
                    fs::write(&path, &text)
                        .map_err(|e| Failure::Usage("IoError".into(), format!("{}: {e}", path.display())))?;
                    let mut doc = envelope("gen");
                    doc["kind"] = json!(kind);
                    doc["n"] = json!(n);
                    doc["seed"] = json!(seed);
                    doc["edges"] = json!(g.edge_count());
                    doc["out"] = json!(path.display().to_string());
                    Ok((doc, true))
                }
            }
        }

        Command::Verify { suite } => {
            let suite = match suite {
                SuiteArg::Small => Suite::Small,
                SuiteArg::Full => Suite::Full,
            };
            let checks = run_suite(suite);
            let ok = checks.iter().all(|c| c.passed());
            let mut doc = envelope("verify");
            doc["suite"] = json!(format!("{suite:?}").to_lowercase());
            doc["checks"] = json!(checks
                .iter()
                .map(|c| {
                    let mut v = serde_json::to_value(c).unwrap();
                    v["passed"] = json!(c.passed());
                    v
                })
                .collect::<Vec<_>>());
            doc["passed"] = json!(ok);
            Ok((doc, ok))
        }
    }
}
