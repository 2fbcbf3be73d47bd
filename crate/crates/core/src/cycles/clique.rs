use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::pack::{normalize_multiedges, pack_cycles, CyclePack, NormalizeStats};
use super::undirected::{undirected_clique_immersion, CliqueStrategy, UndirectedCliqueImmersion};
use crate::dense::Immersed;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiDigraph, SimpleGraph, VertexId};
use crate::immersion::{ImmersionCertificate, LiftedGraph};
use crate::pipeline::min_degree_subgraph;
use crate::scalar::Real;

/// Undirected graph of the chosen simple edges, each pair remembering the
/// first cycle that chose it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxiliaryGraph {
    pub graph: SimpleGraph,
    pub cycle_of: BTreeMap<(VertexId, VertexId), usize>,
}

impl AuxiliaryGraph {
    pub fn from_pack(g: &MultiDigraph, pack: &CyclePack) -> Result<Self> {
        let mut graph = SimpleGraph::with_vertices(g.vertices());
        let mut cycle_of = BTreeMap::new();
        for (i, &id) in pack.chosen.iter().enumerate() {
            let e = g.endpoints(id)?;
            let key = (e.tail.min(e.head), e.tail.max(e.head));
            if graph.add_edge(e.tail, e.head)? {
                cycle_of.insert(key, i);
            }
        }
        Ok(AuxiliaryGraph { graph, cycle_of })
    }
}

/// Splits a vertex-simple cycle at `from` and `to` into the arc from `from`
/// to `to` and the arc back.
fn arcs(g: &MultiDigraph, cycle: &[EdgeId], from: VertexId, to: VertexId) -> Result<(Vec<EdgeId>, Vec<EdgeId>)> {
    let start = cycle
        .iter()
        .position(|&id| g.edge(id).is_some_and(|e| e.tail == from))
        .ok_or_else(|| Error::input(format!("cycle does not pass through {from}")))?;
    let rotated: Vec<EdgeId> = cycle[start..].iter().chain(&cycle[..start]).copied().collect();
    let cut = rotated
        .iter()
        .position(|&id| g.edge(id).is_some_and(|e| e.head == to))
        .ok_or_else(|| Error::input(format!("cycle does not pass through {to}")))?;
    let (q, q_back) = rotated.split_at(cut + 1);
    Ok((q.to_vec(), q_back.to_vec()))
}

/// Turns an undirected clique immersion in the auxiliary graph into a
/// complete-digraph immersion: the path `x_0 … x_r` becomes the forward arcs
/// of its cycles one way and the backward arcs in reverse order the other way.
pub fn lift_directed_clique(
    lg: &LiftedGraph,
    pack: &CyclePack,
    aux: &AuxiliaryGraph,
    und: &UndirectedCliqueImmersion,
) -> Result<ImmersionCertificate> {
    let g = lg.current();
    pack.check(g)?;
    und.verify(&aux.graph)?;
    let s = und.s();
    let mut claimed: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let mut forward: BTreeMap<(usize, usize), Vec<EdgeId>> = BTreeMap::new();
    for (&(i, j), path) in &und.paths {
        let mut there = Vec::new();
        let mut back: Vec<Vec<EdgeId>> = Vec::new();
        for w in path.windows(2) {
            let key = (w[0].min(w[1]), w[0].max(w[1]));
            let c = *aux
                .cycle_of
                .get(&key)
                .ok_or_else(|| Error::input(format!("no cycle chose {{{}, {}}}", w[0], w[1])))?;
            if let Some(other) = claimed.insert(c, (i, j)) {
                return Err(Error::input(format!("cycle {c} used by pairs {other:?} and {:?}", (i, j))));
            }
            let cycle = pack.cycles[c].edges();
            let (q, q_back) = arcs(g, cycle, w[0], w[1])?;
            let mut both: Vec<EdgeId> = q.iter().chain(&q_back).copied().collect();
            both.sort();
            let mut whole = cycle.to_vec();
            whole.sort();
            if both != whole {
                return Err(Error::internal(format!("arcs of cycle {c} do not cover it")));
            }
            there.extend(q);
            back.push(q_back);
        }
        forward.insert((i, j), there);
        forward.insert((j, i), back.into_iter().rev().flatten().collect());
    }

    let pattern = MultiDigraph::complete(s);
    let mut trails = BTreeMap::new();
    for (id, e) in pattern.edges() {
        let trail = forward
            .remove(&(e.tail.0, e.head.0))
            .ok_or_else(|| Error::input(format!("no path for pair ({}, {})", e.tail, e.head)))?;
        trails.insert(id, trail);
    }
    let vertex_map = und.branch.iter().enumerate().map(|(i, &v)| (VertexId(i), v)).collect();
    let inner = ImmersionCertificate::new(Arc::new(g.clone()), pattern, vertex_map, trails);
    ImmersionCertificate::compose(&lg.extract_certificate(), &inner)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueParams {
    /// Use the asymptotic cycle count and clique size, and refuse when they
    /// are below 1 and 2.
    pub strict: bool,
    /// Cycles to pack outside strict mode; `None` packs as many as possible.
    pub ell: Option<usize>,
    /// Largest auxiliary core searched exactly.
    pub exact_cap: usize,
}

impl CliqueParams {
    pub fn paper() -> Self {
        CliqueParams {
            strict: true,
            ell: None,
            exact_cap: 8,
        }
    }

    pub fn desk() -> Self {
        CliqueParams {
            strict: false,
            ..Self::paper()
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CliqueReport {
    pub n: usize,
    pub ell: Option<usize>,
    /// Clique size required in strict mode.
    pub target: Option<usize>,
    pub normalize: NormalizeStats,
    pub cycles: usize,
    pub longest_cycle: usize,
    pub auxiliary_edges: usize,
    pub core_vertices: usize,
    pub core_min_degree: usize,
    pub strategy: CliqueStrategy,
    pub s: usize,
}

/// `(⌊2⁻¹⁶ α⁴ n²⌋, ⌊10⁻⁹ α⁴ n⌋)`.
pub fn strict_sizes<T: Real>(alpha: T, n: usize) -> (usize, usize) {
    let a4 = alpha.powi(4);
    let nn = T::count(n);
    let ell = (a4 * nn * nn / T::lit(65536.0)).floor().to_usize().unwrap_or(0);
    let s = (T::lit(1e-9) * a4 * nn).floor().to_usize().unwrap_or(0);
    (ell, s)
}

/// Immerses a complete digraph in an Eulerian multi-digraph whose underlying
/// graph has minimum degree at least αn.
pub fn dense_to_complete<T: Real>(
    lg: &LiftedGraph,
    alpha: T,
    p: &CliqueParams,
) -> Result<Immersed<CliqueReport>> {
    let g = lg.current();
    let n = g.vertex_count();
    if !(alpha > T::zero() && alpha <= T::one()) {
        return Err(Error::precondition(format!("alpha = {alpha} is not in (0, 1]")));
    }
    if n == 0 || !g.is_eulerian() {
        return Err(Error::precondition("input must be a nonempty Eulerian digraph"));
    }
    let delta = g.underlying_simple().min_degree();
    if !T::count(delta).at_least(alpha * T::count(n)) {
        return Err(Error::precondition(format!(
            "underlying minimum degree {delta} is below {alpha} * {n}"
        )));
    }
    let (ell, target) = if p.strict {
        let (ell, s) = strict_sizes(alpha, n);
        if ell < 1 || s < 2 {
            return Err(Error::hypothesis(
                "dense to complete",
                format!("at n = {n} and alpha = {alpha} the cycle count is {ell} and the clique size {s}"),
            ));
        }
        (Some(ell), Some(s))
    } else {
        (p.ell, None)
    };

    let (normal, normalize) = normalize_multiedges(lg)?;
    let h = normal.current();
    let pack = pack_cycles(h, ell, alpha, p.strict)?;
    let aux = AuxiliaryGraph::from_pack(h, &pack)?;
    let core = if aux.graph.edge_count() == 0 {
        SimpleGraph::new()
    } else {
        min_degree_subgraph(&aux.graph, T::lit(0.5))?
    };
    let und = undirected_clique_immersion(&core, p.exact_cap);
    if let Some(t) = target {
        if und.s() < t {
            return Err(Error::hypothesis(
                "clique",
                format!("found K_{} in the auxiliary core, need K_{t}", und.s()),
            ));
        }
    }
    let certificate = lift_directed_clique(&normal, &pack, &aux, &und)?;
    let verdict = certificate.verify();
    if !verdict.is_valid() {
        return Err(Error::internal(format!("complete-digraph certificate invalid: {verdict}")));
    }
    let report = CliqueReport {
        n,
        ell,
        target,
        normalize,
        cycles: pack.len(),
        longest_cycle: pack.cycles.iter().map(|c| c.len()).max().unwrap_or(0),
        auxiliary_edges: aux.graph.edge_count(),
        core_vertices: core.vertex_count(),
        core_min_degree: core.min_degree(),
        strategy: und.strategy,
        s: und.s(),
    };
    Ok(Immersed { certificate, report })
}
