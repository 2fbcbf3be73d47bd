use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiDigraph, VertexId};

/// Directed walk with no repeated edge identity. Vertices may repeat.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Trail {
    edges: Vec<EdgeId>,
    start: VertexId,
    end: VertexId,
}

impl Trail {
    /// Validates `edges` against `g`: nonempty, present, consecutive, no repeats.
    pub fn new(g: &MultiDigraph, edges: Vec<EdgeId>) -> Result<Trail> {
        let first = *edges
            .first()
            .ok_or_else(|| Error::input("a trail needs at least one edge"))?;
        let start = g.endpoints(first)?.tail;
        let mut at = start;
        let mut seen = BTreeSet::new();
        for &id in &edges {
            let e = g.endpoints(id)?;
            if e.tail != at {
                return Err(Error::input(format!(
                    "edge {id} starts at {} but the trail is at {at}",
                    e.tail
                )));
            }
            if !seen.insert(id) {
                return Err(Error::input(format!("edge {id} repeated in trail")));
            }
            at = e.head;
        }
        Ok(Trail {
            edges,
            start,
            end: at,
        })
    }

    pub fn single(g: &MultiDigraph, id: EdgeId) -> Result<Trail> {
        Trail::new(g, vec![id])
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn into_edges(self) -> Vec<EdgeId> {
        self.edges
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn end(&self) -> VertexId {
        self.end
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.start == self.end
    }

    /// Vertices visited in order, including both endpoints.
    pub fn vertices(&self, g: &MultiDigraph) -> Vec<VertexId> {
        let mut vs = Vec::with_capacity(self.edges.len() + 1);
        vs.push(self.start);
        for id in &self.edges {
            vs.push(g.edge(*id).expect("trail edge in graph").head);
        }
        vs
    }

    /// Concatenation; fails if the endpoints do not meet or an edge repeats.
    pub fn concat(&self, other: &Trail) -> Result<Trail> {
        if self.end != other.start {
            return Err(Error::input(format!(
                "cannot join a trail ending at {} to one starting at {}",
                self.end, other.start
            )));
        }
        let mine: BTreeSet<_> = self.edges.iter().collect();
        if let Some(dup) = other.edges.iter().find(|e| mine.contains(e)) {
            return Err(Error::input(format!("edge {dup} would repeat")));
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Ok(Trail {
            edges,
            start: self.start,
            end: other.end,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_gaps_repeats_and_empty() {
        let g = MultiDigraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(Trail::new(&g, vec![]).is_err());
        assert!(Trail::new(&g, vec![EdgeId(0), EdgeId(2)]).is_err());
        assert!(Trail::new(&g, vec![EdgeId(0), EdgeId(1), EdgeId(2), EdgeId(0)]).is_err());
        let t = Trail::new(&g, vec![EdgeId(0), EdgeId(1), EdgeId(2)]).unwrap();
        assert!(t.is_closed());
        assert_eq!(t.vertices(&g).len(), 4);
    }

    #[test]
    fn concat_checks_meeting_point() {
        let g = MultiDigraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let a = Trail::single(&g, EdgeId(0)).unwrap();
        let b = Trail::single(&g, EdgeId(1)).unwrap();
        assert_eq!(a.concat(&b).unwrap().end(), VertexId(2));
        assert!(b.concat(&a).is_err());
        assert!(a.concat(&a).is_err());
    }
}
