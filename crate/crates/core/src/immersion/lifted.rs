use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::certificate::ImmersionCertificate;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiDigraph, VertexId};

/// Working graph whose edges stand for edge-disjoint trails in a fixed root.
///
/// Current vertices are tracked by `vertex_map` into the root; it starts as
/// the identity and only changes under [`LiftedGraph::restrict_vertices`].
#[derive(Clone, Debug)]
pub struct LiftedGraph {
    root: Arc<MultiDigraph>,
    current: MultiDigraph,
    vertex_map: Vec<VertexId>,
    provenance: BTreeMap<EdgeId, Vec<EdgeId>>,
}

impl LiftedGraph {
    pub fn new(root: Arc<MultiDigraph>) -> Self {
        let current = (*root).clone();
        let vertex_map = root.vertices().collect();
        let provenance = root.edge_ids().map(|id| (id, vec![id])).collect();
        LiftedGraph {
            root,
            current,
            vertex_map,
            provenance,
        }
    }

    pub fn from_graph(root: MultiDigraph) -> Self {
        Self::new(Arc::new(root))
    }

    /// Resumes lifting from a certificate: the pattern becomes the current
    /// graph and its trails the provenance. The certificate must be valid.
    pub fn from_certificate(cert: &ImmersionCertificate) -> Result<Self> {
        let report = cert.verify();
        if !report.is_valid() {
            return Err(Error::input(format!("certificate is {report}")));
        }
        let current = cert.pattern().clone();
        let vertex_map = current
            .vertices()
            .map(|v| cert.image(v).expect("valid certificate maps every vertex"))
            .collect();
        Ok(LiftedGraph {
            root: cert.host_arc().clone(),
            current,
            vertex_map,
            provenance: cert.trails().clone(),
        })
    }

    pub fn root(&self) -> &MultiDigraph {
        &self.root
    }

    pub fn root_arc(&self) -> &Arc<MultiDigraph> {
        &self.root
    }

    pub fn current(&self) -> &MultiDigraph {
        &self.current
    }

    pub fn vertex_map(&self) -> &[VertexId] {
        &self.vertex_map
    }

    pub fn root_vertex(&self, v: VertexId) -> VertexId {
        self.vertex_map[v.0]
    }

    pub fn provenance(&self, id: EdgeId) -> Option<&[EdgeId]> {
        self.provenance.get(&id).map(Vec::as_slice)
    }

    /// Root edges not used by any provenance trail.
    pub fn unused_root_edges(&self) -> BTreeSet<EdgeId> {
        let used: BTreeSet<EdgeId> = self.provenance.values().flatten().copied().collect();
        self.root.edge_ids().filter(|e| !used.contains(e)).collect()
    }

    /// Replaces consecutive `e1 = x→y`, `e2 = y→z` by a fresh edge `x→z`.
    pub fn split(&mut self, e1: EdgeId, e2: EdgeId) -> Result<EdgeId> {
        if e1 == e2 {
            return Err(Error::input(format!("cannot split {e1} with itself")));
        }
        let a = self.current.endpoints(e1)?;
        let b = self.current.endpoints(e2)?;
        if a.head != b.tail {
            return Err(Error::input(format!(
                "{e1} ends at {} but {e2} starts at {}",
                a.head, b.tail
            )));
        }
        if a.tail == b.head && !self.current.loops_allowed() {
            return Err(Error::Loop {
                first: e1,
                second: e2,
                vertex: a.tail,
            });
        }
        self.current.remove_edge(e1)?;
        self.current.remove_edge(e2)?;
        let id = self.current.add_edge(a.tail, b.head)?;
        let mut trail = self.provenance.remove(&e1).expect("provenance for live edge");
        trail.extend(self.provenance.remove(&e2).expect("provenance for live edge"));
        self.provenance.insert(id, trail);
        Ok(id)
    }

    /// Collapses a whole trail of current edges into one edge. Checked up
    /// front, so on error nothing changes.
    pub fn split_trail(&mut self, edges: &[EdgeId]) -> Result<EdgeId> {
        let first = *edges
            .first()
            .ok_or_else(|| Error::input("cannot split an empty trail"))?;
        let start = self.current.endpoints(first)?.tail;
        let mut at = start;
        let mut seen = BTreeSet::new();
        for (i, &id) in edges.iter().enumerate() {
            let e = self.current.endpoints(id)?;
            if e.tail != at || !seen.insert(id) {
                return Err(Error::input(format!("edges do not form a trail at {id}")));
            }
            if i > 0 && e.head == start && !self.current.loops_allowed() {
                return Err(Error::Loop {
                    first,
                    second: id,
                    vertex: start,
                });
            }
            at = e.head;
        }
        let mut acc = first;
        for &id in &edges[1..] {
            acc = self.split(acc, id)?;
        }
        Ok(acc)
    }

    pub fn delete_edges(&mut self, ids: &[EdgeId]) -> Result<()> {
        let mut distinct = BTreeSet::new();
        for &id in ids {
            if !self.current.contains_edge(id) || !distinct.insert(id) {
                return Err(Error::input(format!("cannot delete {id}")));
            }
        }
        for id in distinct {
            self.current.remove_edge(id)?;
            self.provenance.remove(&id);
        }
        Ok(())
    }

    /// Keeps only `keep`, relabelled `0..keep.len()` in the given order.
    /// Edges touching other vertices are deleted first.
    pub fn restrict_vertices(&mut self, keep: &[VertexId]) -> Result<()> {
        let inside: BTreeSet<VertexId> = keep.iter().copied().collect();
        let doomed: Vec<EdgeId> = self
            .current
            .edges()
            .filter(|(_, e)| !inside.contains(&e.tail) || !inside.contains(&e.head))
            .map(|(id, _)| id)
            .collect();
        let current = self.current.induced(keep)?;
        for id in doomed {
            self.provenance.remove(&id);
        }
        self.vertex_map = keep.iter().map(|v| self.vertex_map[v.0]).collect();
        self.current = current;
        Ok(())
    }

    /// Adds a current edge standing for `trail` in the root. The caller
    /// guarantees the trail runs between the right root vertices and avoids
    /// all other provenance.
    pub(crate) fn push_edge(
        &mut self,
        tail: VertexId,
        head: VertexId,
        trail: Vec<EdgeId>,
    ) -> Result<EdgeId> {
        debug_assert!(trail
            .iter()
            .all(|e| self.provenance.values().all(|t| !t.contains(e))));
        let id = self.current.add_edge(tail, head)?;
        self.provenance.insert(id, trail);
        Ok(id)
    }

    /// Root-vertex-space view: every current edge plus every unused root edge.
    /// Returns the view and the map from current ids to view ids.
    pub(crate) fn with_complement(&self) -> Result<(LiftedGraph, BTreeMap<EdgeId, EdgeId>)> {
        let mut g = MultiDigraph::new(self.root.vertex_count());
        g.set_loops_allowed(self.current.loops_allowed());
        let mut provenance = BTreeMap::new();
        for id in self.unused_root_edges() {
            let e = self.root.endpoints(id)?;
            g.insert_edge(id, e.tail, e.head)?;
            provenance.insert(id, vec![id]);
        }
        g.reserve_ids_below(self.root.next_edge_id());
        g.reserve_ids_below(self.current.next_edge_id());
        let mut ids = BTreeMap::new();
        for (id, e) in self.current.edges() {
            let new = g.add_edge(self.root_vertex(e.tail), self.root_vertex(e.head))?;
            provenance.insert(new, self.provenance[&id].clone());
            ids.insert(id, new);
        }
        let view = LiftedGraph {
            root: self.root.clone(),
            vertex_map: g.vertices().collect(),
            current: g,
            provenance,
        };
        Ok((view, ids))
    }

    pub fn extract_certificate(&self) -> ImmersionCertificate {
        let vertex_map = self
            .vertex_map
            .iter()
            .enumerate()
            .map(|(i, &r)| (VertexId(i), r))
            .collect();
        ImmersionCertificate::new(
            self.root.clone(),
            self.current.clone(),
            vertex_map,
            self.provenance.clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lift(n: usize, edges: &[(usize, usize)]) -> LiftedGraph {
        LiftedGraph::from_graph(MultiDigraph::from_edges(n, edges.iter().copied()).unwrap())
    }

    #[test]
    fn fresh_lift_is_identity() {
        let lg = lift(3, &[(0, 1), (1, 2), (2, 0)]);
        let c = lg.extract_certificate();
        assert!(c.verify().is_valid());
        assert_eq!(c.pattern(), lg.root());
    }

    #[test]
    fn triangle_split() {
        let mut lg = lift(3, &[(0, 1), (1, 2), (2, 0)]);
        let id = lg.split(EdgeId(0), EdgeId(1)).unwrap();
        assert_eq!(id, EdgeId(3));
        assert_eq!(lg.current().edge_count(), 2);
        assert!(lg.current().is_eulerian());
        assert_eq!(lg.provenance(id), Some(&[EdgeId(0), EdgeId(1)][..]));
        assert!(lg.extract_certificate().verify().is_valid());
    }

    #[test]
    fn loop_and_gap_errors() {
        let mut lg = lift(3, &[(0, 1), (1, 0), (1, 2)]);
        assert!(matches!(lg.split(EdgeId(0), EdgeId(1)), Err(Error::Loop { .. })));
        assert!(matches!(lg.split(EdgeId(1), EdgeId(2)), Err(Error::Input(_))));
        assert!(matches!(lg.split(EdgeId(0), EdgeId(0)), Err(Error::Input(_))));
        assert_eq!(lg.current().edge_count(), 3);
    }

    #[test]
    fn path_collapses_to_one_edge() {
        let mut lg = lift(4, &[(0, 1), (1, 2), (2, 3)]);
        let a = lg.split(EdgeId(0), EdgeId(1)).unwrap();
        let b = lg.split(a, EdgeId(2)).unwrap();
        assert_eq!(lg.provenance(b).unwrap().len(), 3);
        let e = lg.current().edge(b).unwrap();
        assert_eq!((e.tail.0, e.head.0), (0, 3));
    }

    #[test]
    fn split_trail_is_atomic() {
        let mut lg = lift(3, &[(0, 1), (1, 2), (2, 0)]);
        let before = lg.current().clone();
        assert!(lg.split_trail(&[EdgeId(0), EdgeId(1), EdgeId(2)]).is_err());
        assert_eq!(lg.current(), &before);
    }

    #[test]
    fn deletions() {
        let mut lg = lift(2, &[(0, 1), (0, 1)]);
        lg.delete_edges(&[EdgeId(0)]).unwrap();
        assert_eq!(lg.provenance(EdgeId(1)), Some(&[EdgeId(1)][..]));
        assert!(lg.delete_edges(&[EdgeId(0)]).is_err());
        lg.delete_edges(&[EdgeId(1)]).unwrap();
        assert_eq!(lg.current().edge_count(), 0);
        assert!(lg.extract_certificate().verify().is_valid());
    }

    #[test]
    fn restriction_relabels() {
        let mut lg = lift(4, &[(0, 1), (1, 2), (2, 3), (3, 1)]);
        lg.restrict_vertices(&[VertexId(3), VertexId(1), VertexId(2)]).unwrap();
        assert_eq!(lg.current().vertex_count(), 3);
        assert_eq!(lg.current().edge_count(), 3);
        assert_eq!(lg.root_vertex(VertexId(0)), VertexId(3));
        assert!(lg.extract_certificate().verify().is_valid());
    }

    #[test]
    fn round_trip_through_certificate() {
        let mut lg = lift(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        lg.split(EdgeId(0), EdgeId(1)).unwrap();
        let c = lg.extract_certificate();
        let mut again = LiftedGraph::from_certificate(&c).unwrap();
        let e = again.split(EdgeId(4), EdgeId(2)).unwrap();
        assert_eq!(again.provenance(e).unwrap().len(), 3);
        assert!(again.extract_certificate().verify().is_valid());
    }
}
