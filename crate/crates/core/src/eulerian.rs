//! Eulerian repair of an immersed subgraph, and the regularise-or-biclique step.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiDigraph, VertexId};
use crate::immersion::{ImmersionCertificate, LiftedGraph};

#[derive(Clone, Debug)]
pub struct Eulerianized {
    pub lifted: LiftedGraph,
    pub stats: EulerianizeStats,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EulerianizeStats {
    /// Sum of |d⁺ - d⁻| over the input subgraph.
    pub initial_imbalance: usize,
    pub iterations: usize,
    pub added_edges: usize,
}

/// Extends the current graph of `sub` to an Eulerian multi-digraph still
/// immersed in `host`, adding one edge per iteration from host edges that no
/// provenance trail uses yet.
pub fn eulerianize_immersion(host: &MultiDigraph, sub: &LiftedGraph) -> Result<Eulerianized> {
    if !host.is_eulerian() {
        return Err(Error::precondition("host is not Eulerian"));
    }
    if sub.root() != host {
        return Err(Error::input("lifted graph is not rooted at the host"));
    }
    let initial = sub.current().imbalance();
    let mut stats = EulerianizeStats {
        initial_imbalance: initial,
        ..Default::default()
    };
    if initial == 0 {
        return Ok(Eulerianized {
            lifted: sub.clone(),
            stats,
        });
    }

    let (mut work, ids) = sub.with_complement()?;
    let mut in_s: BTreeSet<EdgeId> = ids.values().copied().collect();
    let n = work.current().vertex_count();
    // surplus[v] = d⁺_S(v) - d⁻_S(v)
    let mut surplus = vec![0i64; n];
    for &id in &in_s {
        let e = work.current().edge(id).expect("view edge");
        surplus[e.tail.0] += 1;
        surplus[e.head.0] -= 1;
    }
    let mut measure: usize = surplus.iter().map(|s| s.unsigned_abs() as usize).sum();
    debug_assert_eq!(measure, initial);

    let mut added = Vec::new();
    while measure > 0 {
        let x = (0..n)
            .find(|&v| surplus[v] > 0)
            .ok_or_else(|| Error::internal("positive imbalance with no surplus vertex"))?;

        // backward walk on edges outside S until a vertex with d⁻_S > d⁺_S
        let g = work.current();
        let mut used = BTreeSet::new();
        let mut walk: Vec<EdgeId> = Vec::new();
        let mut at = x;
        loop {
            let next = g
                .in_edges(VertexId(at))
                .find(|id| !in_s.contains(id) && !used.contains(id))
                .ok_or_else(|| Error::internal("backward walk stuck in an Eulerian graph"))?;
            used.insert(next);
            walk.push(next);
            at = g.edge(next).expect("view edge").tail.0;
            if surplus[at] < 0 {
                break;
            }
        }
        walk.reverse();

        // forward vertex sequence p_0 .. p_k with p_0 deficient, p_k = x
        let mut verts = vec![at];
        for id in &walk {
            verts.push(g.edge(*id).expect("view edge").head.0);
        }
        let j = verts
            .iter()
            .position(|&v| surplus[v] > 0)
            .expect("walk ends at a surplus vertex");
        let i = verts[..j]
            .iter()
            .rposition(|&v| surplus[v] < 0)
            .expect("walk starts at a deficient vertex");
        let (a, b) = (verts[i], verts[j]);

        let new = work.split_trail(&walk[i..j])?;
        in_s.insert(new);
        surplus[a] += 1;
        surplus[b] -= 1;
        let next_measure: usize = surplus.iter().map(|s| s.unsigned_abs() as usize).sum();
        if next_measure + 2 != measure {
            return Err(Error::internal("imbalance did not drop by two"));
        }
        measure = next_measure;
        stats.iterations += 1;
        added.push(new);
    }

    // back to the caller's vertex labels
    let mut to_current: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for (i, &r) in sub.vertex_map().iter().enumerate() {
        to_current.insert(r, VertexId(i));
    }
    let mut lifted = sub.clone();
    for id in added {
        let e = work.current().edge(id).expect("added edge");
        let (Some(&t), Some(&h)) = (to_current.get(&e.tail), to_current.get(&e.head)) else {
            return Err(Error::internal("new edge leaves the subgraph's vertex set"));
        };
        let trail = work.provenance(id).expect("provenance").to_vec();
        lifted.push_edge(t, h, trail)?;
        stats.added_edges += 1;
    }
    if !lifted.current().is_eulerian() {
        return Err(Error::internal("repaired graph is not Eulerian"));
    }
    Ok(Eulerianized { lifted, stats })
}

#[derive(Clone, Debug)]
pub enum Regularized {
    /// A simple Eulerian digraph with every in- and out-degree equal to 2d.
    Regular(LiftedGraph),
    /// Pattern vertices `0..d` are the sources, `d..2d` the sinks.
    Biclique(ImmersionCertificate),
}

/// The complete one-directional biclique with sources `0..d` and sinks `d..2d`.
pub fn biclique_pattern(d: usize) -> MultiDigraph {
    let edges = (0..d).flat_map(|a| (0..d).map(move |b| (a, d + b)));
    MultiDigraph::from_edges(2 * d, edges).expect("biclique edges in range")
}

/// Splits off excess degree until the graph is 2d-regular, or stops at an
/// in/out neighbourhood pair that is already a complete biclique.
pub fn regularize_or_biclique(g: &MultiDigraph, d: usize) -> Result<Regularized> {
    if d == 0 {
        return Err(Error::precondition("d must be positive"));
    }
    if !g.is_simple() || !g.is_eulerian() {
        return Err(Error::precondition("input must be simple and Eulerian"));
    }
    if g.vertex_count() == 0 || g.min_in_degree() < 2 * d {
        return Err(Error::precondition(format!(
            "minimum in-degree {} is below 2d = {}",
            g.min_in_degree(),
            2 * d
        )));
    }
    let mut lg = LiftedGraph::from_graph(g.clone());
    loop {
        let cur = lg.current();
        let Some(u) = cur.vertices().find(|&v| cur.in_degree(v) > 2 * d) else {
            return Ok(Regularized::Regular(lg));
        };
        let outs: Vec<VertexId> = cur.out_neighbours(u).into_iter().take(d).collect();
        let out_set: BTreeSet<VertexId> = outs.iter().copied().collect();
        let ins: Vec<VertexId> = cur
            .in_neighbours(u)
            .into_iter()
            .filter(|v| !out_set.contains(v))
            .take(d)
            .collect();
        if ins.len() < d || outs.len() < d {
            return Err(Error::internal("too few distinct neighbours in a simple graph"));
        }
        let gap = ins
            .iter()
            .flat_map(|&a| outs.iter().map(move |&b| (a, b)))
            .find(|&(a, b)| cur.multiplicity(a, b) == 0);
        let Some((a, b)) = gap else {
            return Ok(Regularized::Biclique(biclique_certificate(&lg, &ins, &outs)?));
        };
        let e1 = cur.parallel_copies(a, u)[0];
        let e2 = cur.parallel_copies(u, b)[0];
        lg.split(e1, e2)?;
        debug_assert!(lg.current().is_simple() && lg.current().is_eulerian());
        debug_assert!(lg.current().min_in_degree() >= 2 * d);
    }
}

fn biclique_certificate(
    lg: &LiftedGraph,
    sources: &[VertexId],
    sinks: &[VertexId],
) -> Result<ImmersionCertificate> {
    let d = sources.len();
    let pattern = biclique_pattern(d);
    let mut vertex_map = BTreeMap::new();
    for (i, &v) in sources.iter().chain(sinks).enumerate() {
        vertex_map.insert(VertexId(i), lg.root_vertex(v));
    }
    let mut trails = BTreeMap::new();
    for (pid, pe) in pattern.edges() {
        let a = sources[pe.tail.0];
        let b = sinks[pe.head.0 - d];
        let host_edge = *lg
            .current()
            .parallel_copies(a, b)
            .first()
            .ok_or_else(|| Error::internal("biclique edge missing"))?;
        let trail = lg.provenance(host_edge).expect("live edge").to_vec();
        trails.insert(pid, trail);
    }
    Ok(ImmersionCertificate::new(
        lg.root_arc().clone(),
        pattern,
        vertex_map,
        trails,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn g(n: usize, edges: &[(usize, usize)]) -> MultiDigraph {
        MultiDigraph::from_edges(n, edges.iter().copied()).unwrap()
    }

    fn complete(n: usize) -> MultiDigraph {
        let edges: Vec<_> = (0..n)
            .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect();
        g(n, &edges)
    }

    fn keep_only(host: &MultiDigraph, keep: &[usize]) -> LiftedGraph {
        let mut lg = LiftedGraph::from_graph(host.clone());
        let drop: Vec<EdgeId> = host.edge_ids().filter(|e| !keep.contains(&e.0)).collect();
        lg.delete_edges(&drop).unwrap();
        lg
    }

    #[test]
    fn already_eulerian_is_unchanged() {
        let host = g(3, &[(0, 1), (1, 2), (2, 0)]);
        let sub = LiftedGraph::from_graph(host.clone());
        let out = eulerianize_immersion(&host, &sub).unwrap();
        assert_eq!(out.lifted.current(), sub.current());
        assert_eq!(out.stats.iterations, 0);
    }

    #[test]
    fn triangle_single_edge() {
        let host = g(3, &[(0, 1), (1, 2), (2, 0)]);
        let out = eulerianize_immersion(&host, &keep_only(&host, &[0])).unwrap();
        let cur = out.lifted.current();
        assert_eq!(cur.edge_count(), 2);
        let (id, e) = cur.edges().find(|(id, _)| *id != EdgeId(0)).unwrap();
        assert_eq!(e, Edge::new(1, 0));
        assert_eq!(out.lifted.provenance(id), Some(&[EdgeId(1), EdgeId(2)][..]));
        assert!(out.lifted.extract_certificate().verify().is_valid());
    }

    #[test]
    fn c6_antipodal_edges() {
        let host = g(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        let out = eulerianize_immersion(&host, &keep_only(&host, &[0, 3])).unwrap();
        let cur = out.lifted.current();
        assert!(cur.is_eulerian());
        assert_eq!(cur.edge_count(), 4);
        assert!(cur.contains_edge(EdgeId(0)) && cur.contains_edge(EdgeId(3)));
        assert!(out.stats.iterations <= out.stats.initial_imbalance);
        assert!(out.lifted.extract_certificate().verify().is_valid());
    }

    #[test]
    fn rejects_unbalanced_host() {
        let host = g(2, &[(0, 1)]);
        let sub = LiftedGraph::from_graph(host.clone());
        assert!(matches!(
            eulerianize_immersion(&host, &sub),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn bidirected_triangle_is_already_regular() {
        let r = regularize_or_biclique(&complete(3), 1).unwrap();
        let Regularized::Regular(lg) = r else { panic!("expected a regular graph") };
        assert_eq!(lg.current(), &complete(3));
    }

    #[test]
    fn k4_stops_at_biclique() {
        // vertex 0: N⁺ = {1}, N⁻ = {2}, and 2→1 is present
        let Regularized::Biclique(c) = regularize_or_biclique(&complete(4), 1).unwrap() else {
            panic!("expected a biclique")
        };
        assert!(c.verify().is_valid());
        assert_eq!(c.pattern(), &biclique_pattern(1));
        assert_eq!(c.image(VertexId(0)), Some(VertexId(2)));
        assert_eq!(c.image(VertexId(1)), Some(VertexId(1)));
    }

    #[test]
    fn circulant_regularizes() {
        // offsets 1, 2, 4 on seven vertices: in-degree 3, d = 1
        let edges: Vec<_> = (0..7)
            .flat_map(|v| [1, 2, 4].map(|s| (v, (v + s) % 7)))
            .collect();
        let Regularized::Regular(lg) = regularize_or_biclique(&g(7, &edges), 1).unwrap() else {
            panic!("expected a regular graph")
        };
        let cur = lg.current();
        assert!(cur.is_simple() && cur.is_eulerian());
        assert!(cur.vertices().all(|v| cur.in_degree(v) == 2 && cur.out_degree(v) == 2));
        assert!(lg.extract_certificate().verify().is_valid());
    }

    #[test]
    fn complete_on_2d_plus_2_gives_biclique() {
        for d in 1..=3 {
            let Regularized::Biclique(c) = regularize_or_biclique(&complete(2 * d + 2), d).unwrap()
            else {
                panic!("expected a biclique")
            };
            assert!(c.verify().is_valid());
            assert_eq!(c.pattern().edge_count(), d * d);
        }
    }

    #[test]
    fn regularize_preconditions() {
        assert!(regularize_or_biclique(&complete(3), 2).is_err());
        assert!(regularize_or_biclique(&g(2, &[(0, 1), (0, 1), (1, 0), (1, 0)]), 1).is_err());
    }
}
