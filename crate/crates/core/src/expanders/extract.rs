use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::check::{check_expansion_auto, ExpansionKind, ForbiddenEdge, Witness};
use super::params::ExpansionParams;
use crate::error::{Error, Result};
use crate::graph::{SimpleGraph, VertexId};
use crate::scalar::Real;

/// Seed and trial count for sampled probing above the exhaustive cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Probe {
    pub seed: u64,
    pub trials: usize,
}

impl Default for Probe {
    fn default() -> Self {
        Probe { seed: 0, trials: 256 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    /// Deleted a vertex of degree below half the average degree.
    DropVertex { vertex: VertexId, degree: usize },
    /// Restricted to one side of a set with too few boundary edges.
    EdgeCut { kept: usize, dropped: usize },
    /// Restricted after a set whose robust neighbourhood was too small.
    VertexCut { kept: usize, dropped: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct AscentStep<T> {
    pub kind: MoveKind,
    pub phi_before: T,
    pub phi_after: T,
}

#[derive(Clone, Debug)]
pub struct Extraction<T> {
    pub graph: SimpleGraph,
    pub trace: Vec<AscentStep<T>>,
    /// The final graph was checked on every vertex subset.
    pub certified: bool,
}

/// φ-ascent: repeatedly replaces `H` by a subgraph with strictly larger
/// φ until no low-degree vertex or violating set is found.
pub fn extract_expander<T: Real>(
    g: &SimpleGraph,
    p: &ExpansionParams<T>,
    probe: Probe,
) -> Result<Extraction<T>> {
    if g.edge_count() == 0 {
        return Err(Error::precondition("graph has no edges"));
    }
    let mut h = g.clone();
    let mut trace = Vec::new();
    let mut certified;
    loop {
        let phi = p.phi(&h);
        let (n, e) = (h.vertex_count(), h.edge_count());
        // degree < d/2 = e/n
        let low = h
            .vertices()
            .filter(|&v| h.degree(v) * n < e)
            .min_by_key(|&v| (h.degree(v), v));
        if let Some(v) = low {
            let degree = h.degree(v);
            h.remove_vertex(v);
            push_step(&mut trace, MoveKind::DropVertex { vertex: v, degree }, phi, p.phi(&h))?;
            continue;
        }

        certified = n <= p.exhaustive_cap;
        let edge = check_expansion_auto(&h, p, ExpansionKind::EdgeUndirected, probe.seed, probe.trials)?;
        if let Some(w) = edge.witness {
            let (next, kept, dropped) = best_side(&h, p, &w, false);
            h = next;
            push_step(&mut trace, MoveKind::EdgeCut { kept, dropped }, phi, p.phi(&h))?;
            continue;
        }
        let vertex =
            check_expansion_auto(&h, p, ExpansionKind::RobustVertexUndirected, probe.seed, probe.trials)?;
        if let Some(w) = vertex.witness {
            let (next, kept, dropped) = best_side(&h, p, &w, true);
            h = next;
            push_step(&mut trace, MoveKind::VertexCut { kept, dropped }, phi, p.phi(&h))?;
            continue;
        }
        break;
    }

    let d_g = g.average_degree_f64();
    let d_h = h.average_degree_f64();
    let slack = 1e-9;
    if d_h + slack < d_g / 2.0 || (h.min_degree() as f64) + slack < d_g / 4.0 {
        return Err(Error::internal(format!(
            "extracted graph has d = {d_h}, min degree {} against d(G) = {d_g}",
            h.min_degree()
        )));
    }
    Ok(Extraction {
        graph: h,
        trace,
        certified,
    })
}

fn push_step<T: Real>(trace: &mut Vec<AscentStep<T>>, kind: MoveKind, before: T, after: T) -> Result<()> {
    if after <= before {
        return Err(Error::internal(format!(
            "ascent move {kind:?} did not raise phi ({before} -> {after})"
        )));
    }
    trace.push(AscentStep {
        kind,
        phi_before: before,
        phi_after: after,
    });
    Ok(())
}

/// Candidate subgraphs from a violating set `X`: `H[X]`, `H[X^c]`, and for
/// vertex violations also `H[X ∪ N(X)]` with the adversary's edges removed
/// from the neighbourhood. Returns the one with largest φ.
fn best_side<T: Real>(
    h: &SimpleGraph,
    p: &ExpansionParams<T>,
    w: &Witness<T>,
    with_closure: bool,
) -> (SimpleGraph, usize, usize) {
    let x: BTreeSet<VertexId> = w.set.iter().copied().collect();
    let rest: BTreeSet<VertexId> = h.vertices().filter(|v| !x.contains(v)).collect();
    let mut candidates = vec![x.clone(), rest];
    if with_closure {
        let cut: BTreeSet<(VertexId, VertexId)> = w
            .forbidden
            .iter()
            .filter_map(|f| match *f {
                ForbiddenEdge::Pair(a, b) => Some((a.min(b), a.max(b))),
                ForbiddenEdge::Id(_) => None,
            })
            .collect();
        let mut t = x.clone();
        for &v in &x {
            for u in h.neighbours(v) {
                if !cut.contains(&(u.min(v), u.max(v))) {
                    t.insert(u);
                }
            }
        }
        candidates.push(t);
    }
    let n = h.vertex_count();
    candidates
        .into_iter()
        .filter(|s| !s.is_empty())
        .map(|s| {
            let sub = h.induced(&s);
            let phi = p.phi(&sub);
            (sub, phi)
        })
        .fold(None::<(SimpleGraph, T)>, |best, (sub, phi)| match best {
            Some((b, bp)) if bp >= phi => Some((b, bp)),
            _ => Some((sub, phi)),
        })
        .map(|(sub, _)| {
            let kept = sub.vertex_count();
            (sub, kept, n - kept)
        })
        .expect("a nonempty side exists")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disjoint_k5s() -> SimpleGraph {
        let mut g = SimpleGraph::complete(5);
        for a in 5..10 {
            g.add_vertex(VertexId(a));
        }
        for a in 5..10 {
            for b in a + 1..10 {
                g.add_edge(VertexId(a), VertexId(b)).unwrap();
            }
        }
        g
    }

    #[test]
    fn splits_disjoint_cliques() {
        let p = ExpansionParams::new(1.0f64);
        let g = disjoint_k5s();
        let out = extract_expander(&g, &p, Probe::default()).unwrap();
        assert_eq!(out.graph.vertex_count(), 5);
        assert_eq!(out.graph.edge_count(), 10);
        assert!(p.phi(&out.graph) > p.phi(&g));
        assert!(out.certified);
    }

    #[test]
    fn complete_graph_is_kept() {
        let p = ExpansionParams::new(1.0f64);
        let k6 = SimpleGraph::complete(6);
        let out = extract_expander(&k6, &p, Probe::default()).unwrap();
        assert_eq!(out.graph, k6);
        assert!(out.trace.is_empty());
    }

    #[test]
    fn pendant_is_dropped() {
        let p = ExpansionParams::new(1.0f64);
        let mut g = SimpleGraph::complete(8);
        g.add_vertex(VertexId(8));
        g.add_edge(VertexId(0), VertexId(8)).unwrap();
        let out = extract_expander(&g, &p, Probe::default()).unwrap();
        assert_eq!(out.graph, SimpleGraph::complete(8));
        assert_eq!(
            out.trace[0].kind,
            MoveKind::DropVertex {
                vertex: VertexId(8),
                degree: 1
            }
        );
    }

    #[test]
    fn edgeless_input_rejected() {
        let p = ExpansionParams::new(1.0f64);
        let g = SimpleGraph::with_vertices([VertexId(0), VertexId(1)]);
        assert!(extract_expander(&g, &p, Probe::default()).is_err());
    }
}
