//! End-to-end construction of a complete-digraph immersion from a simple
//! Eulerian digraph of large minimum in-degree, with the constant profiles
//! and instance generators used to drive it.

mod generate;
mod peel;

use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use generate::{circulant, generate, Instance};
pub use peel::min_degree_subgraph;

use crate::cycles::{dense_to_complete, CliqueParams};
use crate::dense::{find_dense_immersion, DenseParams};
use crate::error::{Error, Result};
use crate::eulerian::eulerianize_immersion;
use crate::graph::{EdgeId, MultiDigraph, VertexId};
use crate::immersion::{ImmersionCertificate, LiftedGraph};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    Paper,
    Desk,
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Paper => "paper",
            Profile::Desk => "desk",
        })
    }
}

impl std::str::FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Profile::Paper),
            "desk" => Ok(Profile::Desk),
            _ => Err(Error::input(format!("unknown profile {s:?}"))),
        }
    }
}

/// Every constant of the construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Constants<T> {
    pub profile: Profile,
    /// Required minimum in-degree is `alpha_main * t`.
    pub alpha_main: T,
    /// `k = ⌈k_scale * t⌉` is the scale handed to the dense step.
    pub k_scale: T,
    /// Density `1/(2β²)` of the graph handed to the complete-digraph step.
    pub alpha_local: T,
    pub dense: DenseParams<T>,
    pub clique: CliqueParams,
}

impl<T: Real> Constants<T> {
    /// β = 100, α = 10¹³β⁸, k = 10¹¹β⁸t.
    pub fn paper() -> Self {
        let dense: DenseParams<T> = DenseParams::paper();
        let b8 = dense.beta.powi(8);
        Constants {
            profile: Profile::Paper,
            alpha_main: T::lit(1e13) * b8,
            k_scale: T::lit(1e11) * b8,
            alpha_local: T::one() / (T::lit(2.0) * dense.beta * dense.beta),
            dense,
            clique: CliqueParams::paper(),
        }
    }

    pub fn desk() -> Self {
        let dense: DenseParams<T> = DenseParams::desk();
        Constants {
            profile: Profile::Desk,
            alpha_main: T::lit(2.0),
            k_scale: T::one(),
            alpha_local: T::one() / (T::lit(2.0) * dense.beta * dense.beta),
            dense,
            clique: CliqueParams::desk(),
        }
    }

    pub fn for_profile(profile: Profile) -> Self {
        match profile {
            Profile::Paper => Self::paper(),
            Profile::Desk => Self::desk(),
        }
    }

    pub fn beta(&self) -> T {
        self.dense.beta
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum StageOutcome {
    Success,
    HypothesisNotMet { detail: String },
    Failed { detail: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: String,
    pub input_vertices: usize,
    pub input_edges: usize,
    pub outcome: StageOutcome,
    pub micros: u128,
    /// Stage-specific figures as JSON.
    pub details: serde_json::Value,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub t: usize,
    pub k: Option<usize>,
    pub stages: Vec<StageRecord>,
    pub pattern_vertices: Option<usize>,
    pub pattern_edges: Option<usize>,
}

impl RunReport {
    pub fn succeeded(&self) -> bool {
        self.pattern_vertices.is_some()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("t = {}", self.t);
        if let Some(k) = self.k {
            out.push_str(&format!(", k = {k}"));
        }
        out.push('\n');
        for s in &self.stages {
            let status = match &s.outcome {
                StageOutcome::Success => "ok".to_string(),
                StageOutcome::HypothesisNotMet { detail } => format!("hypothesis not met: {detail}"),
                StageOutcome::Failed { detail } => format!("failed: {detail}"),
            };
            out.push_str(&format!(
                "{:<18} n={:<5} e={:<7} {:>9}us  {status}\n",
                s.stage, s.input_vertices, s.input_edges, s.micros
            ));
        }
        if let (Some(v), Some(e)) = (self.pattern_vertices, self.pattern_edges) {
            out.push_str(&format!("certificate: {v} vertices, {e} edges\n"));
        }
        out
    }
}

/// Outcome of a pipeline run. The report is filled in either way.
#[derive(Debug)]
pub struct PipelineRun {
    pub result: Result<ImmersionCertificate>,
    pub report: RunReport,
}

struct Recorder {
    report: RunReport,
}

impl Recorder {
    fn stage<R>(
        &mut self,
        name: &str,
        input: (usize, usize),
        f: impl FnOnce() -> Result<R>,
        details: impl FnOnce(&R) -> serde_json::Value,
    ) -> Result<R> {
        let start = Instant::now();
        let out = f();
        let micros = start.elapsed().as_micros();
        let (outcome, details) = match &out {
            Ok(r) => (StageOutcome::Success, details(r)),
            Err(e) if e.is_hypothesis_failure() => (
                StageOutcome::HypothesisNotMet { detail: e.to_string() },
                serde_json::Value::Null,
            ),
            Err(e) => (StageOutcome::Failed { detail: e.to_string() }, serde_json::Value::Null),
        };
        self.report.stages.push(StageRecord {
            stage: name.to_string(),
            input_vertices: input.0,
            input_edges: input.1,
            outcome,
            micros,
            details,
        });
        out
    }
}

fn size(g: &MultiDigraph) -> (usize, usize) {
    (g.vertex_count(), g.edge_count())
}

fn json<S: Serialize>(s: &S) -> serde_json::Value {
    serde_json::to_value(s).unwrap_or(serde_json::Value::Null)
}

/// The one-vertex complete digraph at vertex 0.
fn single_vertex(host: Arc<MultiDigraph>) -> ImmersionCertificate {
    let vertex_map = [(VertexId(0), VertexId(0))].into_iter().collect();
    ImmersionCertificate::new(host, MultiDigraph::new(1), vertex_map, Default::default())
}

/// The complete digraph on the first `t` pattern vertices, renumbered so the
/// pattern equals [`MultiDigraph::complete`].
fn first_vertices(cert: &ImmersionCertificate, t: usize) -> Result<ImmersionCertificate> {
    let keep: Vec<VertexId> = (0..t).map(VertexId).collect();
    let sub = cert.restrict(&keep)?;
    let pattern = MultiDigraph::complete(t);
    let mut trails = std::collections::BTreeMap::new();
    for (id, e) in pattern.edges() {
        let old = *sub
            .pattern()
            .parallel_copies(e.tail, e.head)
            .first()
            .ok_or_else(|| Error::internal(format!("pattern lacks {} -> {}", e.tail, e.head)))?;
        trails.insert(id, sub.trails()[&old].clone());
    }
    Ok(ImmersionCertificate::new(
        sub.host_arc().clone(),
        pattern,
        sub.vertex_map().clone(),
        trails,
    ))
}

/// Immerses the complete digraph on `t` vertices: dense subgraph, underlying
/// graph, min-degree core, an orientation inside the dense subgraph, Eulerian
/// repair, complete digraph, then restriction to `t` branch vertices.
pub fn immerse_complete<T: Real>(host: &Arc<MultiDigraph>, t: usize, c: &Constants<T>) -> PipelineRun {
    let mut rec = Recorder {
        report: RunReport {
            t,
            ..Default::default()
        },
    };
    let result = run(host, t, c, &mut rec);
    if let Ok(cert) = &result {
        rec.report.pattern_vertices = Some(cert.pattern().vertex_count());
        rec.report.pattern_edges = Some(cert.pattern().edge_count());
    }
    PipelineRun {
        result,
        report: rec.report,
    }
}

fn run<T: Real>(host: &Arc<MultiDigraph>, t: usize, c: &Constants<T>, rec: &mut Recorder) -> Result<ImmersionCertificate> {
    let g: &MultiDigraph = host;
    if t == 0 {
        return Err(Error::input("t must be positive"));
    }
    if !g.is_simple() || !g.is_eulerian() || g.vertex_count() == 0 {
        return Err(Error::precondition("input must be a nonempty simple Eulerian digraph"));
    }
    if t == 1 {
        return Ok(single_vertex(host.clone()));
    }
    let need = c.alpha_main * T::count(t);
    let delta = g.min_in_degree();
    if !T::count(delta).at_least(need) {
        return Err(Error::precondition(format!("minimum in-degree {delta} is below {need}")));
    }
    let k = (c.k_scale * T::count(t))
        .ceil()
        .to_usize()
        .ok_or_else(|| Error::precondition("k does not fit in a machine integer"))?;
    rec.report.k = Some(k);

    let dense = rec.stage(
        "dense",
        size(g),
        || find_dense_immersion(host, k, &c.dense),
        |d| json(&d.report),
    )?;
    let d1 = dense.certificate.pattern();

    let g1 = rec.stage(
        "underlying",
        size(d1),
        || Ok(d1.underlying_simple()),
        |u| serde_json::json!({ "vertices": u.vertex_count(), "edges": u.edge_count() }),
    )?;
    let g2 = rec.stage(
        "min-degree",
        (g1.vertex_count(), g1.edge_count()),
        || min_degree_subgraph(&g1, T::lit(0.5)),
        |h| serde_json::json!({ "vertices": h.vertex_count(), "min_degree": h.min_degree() }),
    )?;

    let oriented = rec.stage(
        "orientation",
        (g2.vertex_count(), g2.edge_count()),
        || {
            let mut lg = LiftedGraph::from_certificate(&dense.certificate)?;
            let keep: Vec<VertexId> = g2.vertices().collect();
            lg.restrict_vertices(&keep)?;
            let chosen: std::collections::BTreeSet<EdgeId> =
                lg.current().canonical_orientation().into_values().collect();
            let doomed: Vec<EdgeId> = lg.current().edge_ids().filter(|id| !chosen.contains(id)).collect();
            lg.delete_edges(&doomed)?;
            Ok(lg)
        },
        |lg| serde_json::json!({ "edges": lg.current().edge_count() }),
    )?;

    let eulerian = rec.stage(
        "eulerianize",
        size(oriented.current()),
        || eulerianize_immersion(g, &oriented),
        |e| json(&e.stats),
    )?;

    let complete = rec.stage(
        "dense-to-complete",
        size(eulerian.lifted.current()),
        || dense_to_complete(&eulerian.lifted, c.alpha_local, &c.clique),
        |out| json(&out.report),
    )?;

    let s = complete.certificate.pattern().vertex_count();
    rec.stage(
        "restrict",
        size(complete.certificate.pattern()),
        || {
            if s < t {
                return Err(Error::hypothesis("restrict", format!("found a complete digraph on {s} vertices, need {t}")));
            }
            let cert = first_vertices(&complete.certificate, t)?;
            let verdict = cert.verify();
            if !verdict.is_valid() {
                return Err(Error::internal(format!("final certificate invalid: {verdict}")));
            }
            Ok(cert)
        },
        |cert| serde_json::json!({ "max_trail_len": cert.max_trail_len() }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const ORDER: [&str; 7] = [
        "dense",
        "underlying",
        "min-degree",
        "orientation",
        "eulerianize",
        "dense-to-complete",
        "restrict",
    ];

    #[test]
    fn bidirected_k12_gives_k2() {
        let host = Arc::new(MultiDigraph::complete(12));
        let run = immerse_complete(&host, 2, &Constants::<f64>::desk());
        let cert = run.result.unwrap();
        assert!(cert.verify().is_valid());
        assert_eq!(cert.pattern(), &MultiDigraph::complete(2));
        let names: Vec<&str> = run.report.stages.iter().map(|s| s.stage.as_str()).collect();
        assert_eq!(names, ORDER);
    }

    #[test]
    fn directed_cycle_fails_before_dense() {
        let host = Arc::new(circulant(10, &[1]).unwrap());
        let run = immerse_complete(&host, 2, &Constants::<f64>::desk());
        assert!(run.result.unwrap_err().is_hypothesis_failure());
        assert!(run.report.stages.is_empty());
    }

    #[test]
    fn single_vertex_for_t1() {
        let host = Arc::new(circulant(5, &[1]).unwrap());
        let cert = immerse_complete(&host, 1, &Constants::<f64>::desk()).result.unwrap();
        assert_eq!(cert.pattern().vertex_count(), 1);
        assert!(cert.trails().is_empty());
        assert!(cert.verify().is_valid());
    }

    #[test]
    fn paper_profile_refuses() {
        let host = Arc::new(MultiDigraph::complete(20));
        let run = immerse_complete(&host, 2, &Constants::<f64>::paper());
        assert!(matches!(run.result, Err(Error::Precondition(_))));
    }

    #[test]
    fn paper_constants() {
        let c = Constants::<f64>::paper();
        assert_eq!(c.beta(), 100.0);
        assert!((c.alpha_main / 1e29 - 1.0).abs() < 1e-12);
        assert!((c.k_scale / 1e27 - 1.0).abs() < 1e-12);
        assert_eq!(c.alpha_local, 1.0 / 20000.0);
        // min in-degree 100k is the same requirement as alpha t
        assert!((c.dense.min_degree_factor as f64 * c.k_scale / c.alpha_main - 1.0).abs() < 1e-12);
    }

    #[test]
    fn report_text_lists_stages() {
        let host = Arc::new(MultiDigraph::complete(12));
        let run = immerse_complete(&host, 2, &Constants::<f64>::desk());
        let text = run.report.to_text();
        assert!(text.contains("eulerianize") && text.contains("certificate: 2 vertices"));
    }
}
