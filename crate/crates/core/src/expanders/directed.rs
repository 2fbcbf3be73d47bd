use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::check::{check_expansion_auto, ExpansionKind, ExpansionReport};
use super::extract::{extract_expander, Extraction, Probe};
use super::params::ExpansionParams;
use crate::error::{Error, Result};
use crate::eulerian::{eulerianize_immersion, EulerianizeStats};
use crate::graph::{EdgeId, MultiDigraph, VertexId};
use crate::immersion::LiftedGraph;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectedExpanderOptions {
    /// Reject inputs with antiparallel pairs. Without this the robust vertex
    /// expansion of the output is not guaranteed and is only reported.
    pub require_oriented: bool,
    pub probe: Probe,
}

impl Default for DirectedExpanderOptions {
    fn default() -> Self {
        DirectedExpanderOptions {
            require_oriented: true,
            probe: Probe::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ExpanderAudit<T> {
    pub eulerian: bool,
    /// 2e/n of the underlying simple graph.
    pub underlying_average_degree: T,
    pub min_in_degree: usize,
    pub min_out_degree: usize,
    pub edge_expansion: ExpansionReport<T>,
    pub vertex_expansion: ExpansionReport<T>,
    pub failures: Vec<String>,
}

impl<T> ExpanderAudit<T> {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct DirectedExpander<T> {
    /// Current graph is the Eulerian expander, on the vertices of the
    /// undirected expander in increasing order.
    pub lifted: LiftedGraph,
    pub undirected: Extraction<T>,
    pub repair: EulerianizeStats,
    pub audit: ExpanderAudit<T>,
}

/// Immerses an Eulerian directed expander with degrees at least `d/8` in a
/// simple `d`-regular Eulerian digraph.
pub fn directed_expander_immersion<T: Real>(
    g: &MultiDigraph,
    d: usize,
    p: &ExpansionParams<T>,
    opts: DirectedExpanderOptions,
) -> Result<DirectedExpander<T>> {
    if d == 0 || g.vertex_count() == 0 {
        return Err(Error::precondition("need d >= 1 and a nonempty graph"));
    }
    if !g.is_simple() || !g.is_eulerian() {
        return Err(Error::precondition("input must be simple and Eulerian"));
    }
    if g
        .vertices()
        .any(|v| g.in_degree(v) != d || g.out_degree(v) != d)
    {
        return Err(Error::precondition(format!("input is not {d}-regular")));
    }
    if opts.require_oriented && g.has_antiparallel_pair() {
        return Err(Error::precondition("input has an antiparallel pair"));
    }

    let undirected = extract_expander(&g.underlying_simple(), p, opts.probe)?;
    let h = &undirected.graph;
    let orientation = g.canonical_orientation();
    let keep: BTreeSet<EdgeId> = h
        .edges()
        .map(|(u, v)| orientation[&(u.min(v), u.max(v))])
        .collect();
    let mut sub = LiftedGraph::from_graph(g.clone());
    let drop: Vec<EdgeId> = g.edge_ids().filter(|id| !keep.contains(id)).collect();
    sub.delete_edges(&drop)?;
    let repaired = eulerianize_immersion(g, &sub)?;
    let mut lifted = repaired.lifted;
    let vertices: Vec<VertexId> = h.vertices().collect();
    let before = lifted.current().edge_count();
    lifted.restrict_vertices(&vertices)?;
    if lifted.current().edge_count() != before {
        return Err(Error::internal("repair added an edge outside the expander"));
    }

    let audit = audit(lifted.current(), d, p, opts.probe)?;
    if !audit.passed() && opts.require_oriented && undirected.certified {
        return Err(Error::internal(format!(
            "directed expander audit failed: {}",
            audit.failures.join("; ")
        )));
    }
    Ok(DirectedExpander {
        lifted,
        undirected,
        repair: repaired.stats,
        audit,
    })
}

fn audit<T: Real>(
    dd: &MultiDigraph,
    d: usize,
    p: &ExpansionParams<T>,
    probe: Probe,
) -> Result<ExpanderAudit<T>> {
    let mut failures = Vec::new();
    let eulerian = dd.is_eulerian();
    if !eulerian {
        failures.push("not Eulerian".to_string());
    }
    let avg = dd.underlying_simple().average_degree_f64();
    if avg + 1e-9 < d as f64 / 2.0 {
        failures.push(format!("underlying average degree {avg} below d/2"));
    }
    let (min_in, min_out) = (dd.min_in_degree(), dd.min_out_degree());
    if 8 * min_in.min(min_out) < d {
        failures.push(format!("minimum degree {} below d/8", min_in.min(min_out)));
    }
    let edge = check_expansion_auto(dd, p, ExpansionKind::EdgeDirected, probe.seed, probe.trials)?;
    if !edge.holds {
        failures.push("directed edge expansion fails".to_string());
    }
    let vertex =
        check_expansion_auto(dd, p, ExpansionKind::RobustVertexDirected, probe.seed, probe.trials)?;
    if !vertex.holds {
        failures.push("robust directed vertex expansion fails".to_string());
    }
    Ok(ExpanderAudit {
        eulerian,
        underlying_average_degree: T::lit(avg),
        min_in_degree: min_in,
        min_out_degree: min_out,
        edge_expansion: edge,
        vertex_expansion: vertex,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circulant(n: usize, offsets: &[usize]) -> MultiDigraph {
        MultiDigraph::from_edges(
            n,
            (0..n).flat_map(|v| offsets.iter().map(move |s| (v, (v + s) % n))),
        )
        .unwrap()
    }

    #[test]
    fn circulant_on_20() {
        let g = circulant(20, &[1, 2, 3, 5]);
        let p = ExpansionParams::new(1.0f64);
        let out = directed_expander_immersion(&g, 4, &p, DirectedExpanderOptions::default()).unwrap();
        assert!(out.audit.passed(), "{:?}", out.audit.failures);
        assert!(out.lifted.extract_certificate().verify().is_valid());
        assert!(out.lifted.current().is_eulerian());
    }

    #[test]
    fn antiparallel_rejected() {
        let g = circulant(5, &[1, 4]);
        let p = ExpansionParams::new(1.0f64);
        assert!(matches!(
            directed_expander_immersion(&g, 2, &p, DirectedExpanderOptions::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn good_input_kept_whole() {
        // the directed triangle is already an expander of itself
        let g = circulant(3, &[1]);
        let p = ExpansionParams::new(1.0f64);
        let out = directed_expander_immersion(&g, 1, &p, DirectedExpanderOptions::default()).unwrap();
        assert_eq!(out.lifted.current(), &g);
        assert_eq!(out.repair.iterations, 0);
    }
}
