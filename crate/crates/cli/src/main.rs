use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use digraph_immersion::cycles::{
    dense_to_complete, few_simple_edge_cycle, normalize_multiedges, pack_cycles, short_cycle_weighted, WeightedDigraph,
};
use digraph_immersion::dense::find_dense_immersion;
use digraph_immersion::expanders::{check_expansion_auto, extract_expander, ExpansionKind, Probe};
use digraph_immersion::pipeline::{generate, Instance};
use digraph_immersion::{immerse_complete, Constants, Error, ImmersionCertificate, LiftedGraph, MultiDigraph, Params, Profile};
use serde_json::{json, Value};

const OK: u8 = 0;
const INVALID: u8 = 1;
const NOT_MET: u8 = 2;
const USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "immerse", version, about = "Certified immersions of complete digraphs")]
struct Cli {
    /// Constant profile.
    #[arg(long, global = true, default_value = "desk")]
    profile: Profile,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the main output here instead of standard output.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    /// Write the run report here instead of standard error.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph in the text format.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Run the full pipeline for a complete digraph on `t` vertices.
    Immerse {
        graph: PathBuf,
        #[arg(long, short)]
        t: usize,
    },
    /// Find a dense immersion with parameter `k`.
    Dense {
        graph: PathBuf,
        #[arg(long, short)]
        k: usize,
    },
    /// Check expansion of the underlying graph and extract an expander.
    Expander {
        graph: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long, default_value_t = 256)]
        trials: usize,
    },
    /// Short cycles, cycle packings and the dense-to-complete step.
    Cycles {
        graph: PathBuf,
        #[arg(long, value_enum)]
        op: CycleOp,
        #[arg(long)]
        alpha: f64,
    },
    /// Check a certificate file against a graph file.
    Verify { graph: PathBuf, certificate: PathBuf },
}

#[derive(Subcommand)]
enum GenKind {
    RandomEulerian {
        n: usize,
        d: usize,
        /// Forbid parallel edges.
        #[arg(long)]
        simple: bool,
    },
    Complete {
        k: usize,
    },
    Biclique {
        k: usize,
    },
    Circulant {
        n: usize,
        #[arg(value_delimiter = ',', required = true)]
        offsets: Vec<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CycleOp {
    /// Shortest cycle under uniform weights.
    Short,
    FewSimple,
    Pack,
    Complete,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("certificate is not valid\n{0}")]
    Invalid(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => INVALID,
            CliError::Io { .. } => USAGE,
            CliError::Core(e) => match e {
                Error::Input(_) | Error::Io(_) | Error::Json(_) => USAGE,
                e if e.is_hypothesis_failure() => NOT_MET,
                _ => INVALID,
            },
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_graph(path: &Path) -> CliResult<Arc<MultiDigraph>> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    Ok(Arc::new(MultiDigraph::from_text(&text)?))
}

fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io { path: p.into(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report(cli: &Cli, text: &str) -> CliResult<()> {
    match &cli.report {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io { path: p.clone(), source }),
        None => {
            eprint!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json value") + "\n"
}

fn run(cli: &Cli) -> CliResult<()> {
    let constants = Constants::for_profile(cli.profile);
    match &cli.command {
        Command::Gen { kind } => {
            let instance = match *kind {
                GenKind::RandomEulerian { n, d, simple: false } => Instance::RandomEulerian { n, d, seed: cli.seed },
                GenKind::RandomEulerian { n, d, simple: true } => Instance::RandomSimpleEulerian { n, d, seed: cli.seed },
                GenKind::Complete { k } => Instance::CompleteDigraph { k },
                GenKind::Biclique { k } => Instance::Biclique { k },
                GenKind::Circulant { n, ref offsets } => Instance::Circulant { n, offsets: offsets.clone() },
            };
            emit(cli.out.as_deref(), &generate(&instance)?.to_text())
        }
        Command::Immerse { graph, t } => {
            let host = read_graph(graph)?;
            let run = immerse_complete(&host, *t, &constants);
            report(cli, &run.report.to_text())?;
            let cert = run.result?;
            emit(cli.out.as_deref(), &(cert.to_json() + "\n"))
        }
        Command::Dense { graph, k } => {
            let host = read_graph(graph)?;
            let found = find_dense_immersion(&host, *k, &constants.dense)?;
            report(cli, &pretty(&serde_json::to_value(&found.report).map_err(Error::from)?))?;
            emit(cli.out.as_deref(), &(found.certificate.to_json() + "\n"))
        }
        Command::Expander { graph, scale, trials } => {
            let host = read_graph(graph)?;
            let g = host.underlying_simple();
            let p = Params::new(*scale);
            let check = check_expansion_auto(&g, &p, ExpansionKind::EdgeUndirected, cli.seed, *trials)?;
            let probe = Probe { seed: cli.seed, trials: *trials };
            let ex = extract_expander(&g, &p, probe)?;
            let summary = json!({
                "input": { "vertices": g.vertices().count(), "edges": g.edge_count(), "average_degree": g.average_degree_f64() },
                "expansion": check,
                "expander": {
                    "vertices": ex.graph.vertices().map(|v| v.0).collect::<Vec<_>>(),
                    "edges": ex.graph.edge_count(),
                    "min_degree": ex.graph.min_degree(),
                    "average_degree": ex.graph.average_degree_f64(),
                    "certified": ex.certified,
                    "trace": ex.trace,
                },
            });
            emit(cli.out.as_deref(), &pretty(&summary))
        }
        Command::Cycles { graph, op, alpha } => {
            let host = read_graph(graph)?;
            let alpha = *alpha;
            let edges = |t: &digraph_immersion::Trail| t.edges().iter().map(|e| e.0).collect::<Vec<_>>();
            match op {
                CycleOp::Short => {
                    let wd = WeightedDigraph::uniform((*host).clone())?;
                    let c = short_cycle_weighted(&wd, alpha)?;
                    emit(cli.out.as_deref(), &pretty(&json!({ "cycle": edges(&c), "length": c.len() })))
                }
                CycleOp::FewSimple => {
                    let c = few_simple_edge_cycle(&host, alpha)?;
                    let v = json!({
                        "cycle": edges(&c.cycle),
                        "simple_edges": c.simple_edges,
                        "route": c.route,
                        "partition": c.partition,
                    });
                    emit(cli.out.as_deref(), &pretty(&v))
                }
                CycleOp::Pack => {
                    let (lg, stats) = normalize_multiedges(&LiftedGraph::new(host.clone()))?;
                    let pack = pack_cycles(lg.current(), None, alpha, false)?;
                    let v = json!({
                        "normalize": stats,
                        "length_cap": pack.length_cap,
                        "cycles": pack.cycles.iter().map(edges).collect::<Vec<_>>(),
                        "steps": pack.steps,
                    });
                    emit(cli.out.as_deref(), &pretty(&v))
                }
                CycleOp::Complete => {
                    let found = dense_to_complete(&LiftedGraph::new(host.clone()), alpha, &constants.clique)?;
                    report(cli, &pretty(&serde_json::to_value(&found.report).map_err(Error::from)?))?;
                    emit(cli.out.as_deref(), &(found.certificate.to_json() + "\n"))
                }
            }
        }
        Command::Verify { graph, certificate } => {
            let host = read_graph(graph)?;
            let cert = ImmersionCertificate::read(certificate, host)?;
            let verdict = cert.verify();
            if !verdict.is_valid() {
                return Err(CliError::Invalid(verdict.to_string()));
            }
            println!(
                "valid: {} pattern vertices, {} pattern edges, longest trail {}",
                cert.pattern().vertex_count(),
                cert.pattern().edge_count(),
                cert.max_trail_len()
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::from(OK),
                _ => ExitCode::from(USAGE),
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::from(OK),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
