use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{SimpleGraph, VertexId};
use crate::scalar::Real;

/// Repeatedly deletes vertices of degree below `c · d(g)`, with `d(g) = 2e/n`
/// fixed from the input. For `c <= 1/2` the result is nonempty.
pub fn min_degree_subgraph<T: Real>(g: &SimpleGraph, c: T) -> Result<SimpleGraph> {
    if g.edge_count() == 0 {
        return Err(Error::input("graph has no edges"));
    }
    let threshold = c * T::lit(g.average_degree_f64());
    let low = |h: &SimpleGraph, v: VertexId| !T::count(h.degree(v)).at_least(threshold);
    let mut h = g.clone();
    let mut queue: VecDeque<VertexId> = h.vertices().filter(|&v| low(&h, v)).collect();
    while let Some(v) = queue.pop_front() {
        if !h.has_vertex(v) {
            continue;
        }
        let nbrs: Vec<VertexId> = h.neighbours(v).collect();
        h.remove_vertex(v);
        queue.extend(nbrs.into_iter().filter(|&u| low(&h, u)));
    }
    if h.vertex_count() == 0 {
        return Err(Error::input(format!("no subgraph has minimum degree {threshold}")));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_keeps_everything() {
        // d = 10/6, so leaves of degree 1 clear the threshold 5/6
        let g = SimpleGraph::from_edges(6, (1..6).map(|i| (0, i))).unwrap();
        assert_eq!(min_degree_subgraph(&g, 0.5).unwrap(), g);
    }

    #[test]
    fn complete_graph_unchanged() {
        let g = SimpleGraph::complete(5);
        assert_eq!(min_degree_subgraph(&g, 0.5).unwrap(), g);
    }

    #[test]
    fn path_survives_at_half() {
        // d = 3/2 and every degree is at least 1 > 3/4
        let g = SimpleGraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let h = min_degree_subgraph(&g, 0.5).unwrap();
        assert_eq!(h, g);
        // c = 1 peels the ends, then the middle edge falls below 3/2 too
        assert!(min_degree_subgraph(&g, 1.0).is_err());
    }

    #[test]
    fn pendant_path_is_peeled() {
        let g = SimpleGraph::from_edges(7, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6)]).unwrap();
        let h = min_degree_subgraph(&g, 0.5).unwrap();
        assert_eq!(h.vertices().collect::<Vec<_>>(), (0..4).map(VertexId).collect::<Vec<_>>());
        assert!(h.min_degree() * 7 >= 9);
    }

    #[test]
    fn edgeless_input_is_rejected() {
        assert!(min_degree_subgraph(&SimpleGraph::with_vertices([VertexId(0)]), 0.5).is_err());
    }
}
