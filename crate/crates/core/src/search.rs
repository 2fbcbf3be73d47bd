//! Breadth-first search kernels shared by the lemma implementations.
//!
//! All searches expand vertices in increasing id order and scan edges in
//! increasing [`EdgeId`] order, so results are deterministic.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeId, MultiDigraph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Along edge orientation, tail to head.
    Forward,
    /// Against edge orientation.
    Backward,
}

impl Direction {
    fn step(self, g: &MultiDigraph, v: VertexId) -> impl Iterator<Item = (EdgeId, VertexId)> + '_ {
        let ids: Box<dyn Iterator<Item = EdgeId> + '_> = match self {
            Direction::Forward => Box::new(g.out_edges(v)),
            Direction::Backward => Box::new(g.in_edges(v)),
        };
        ids.map(move |id| {
            let e = g.edge(id).expect("adjacency is consistent");
            let next = match self {
                Direction::Forward => e.head,
                Direction::Backward => e.tail,
            };
            (id, next)
        })
    }
}

/// BFS tree: distance and the edge used to reach each discovered vertex.
#[derive(Clone, Debug, Default)]
pub struct SearchTree {
    pub dist: BTreeMap<VertexId, usize>,
    pub via: BTreeMap<VertexId, EdgeId>,
}

impl SearchTree {
    /// Edges from the root set to `v`, in walking order for the tree's direction.
    pub fn path_to(&self, g: &MultiDigraph, v: VertexId, dir: Direction) -> Vec<EdgeId> {
        let mut edges = Vec::new();
        let mut cur = v;
        while let Some(&id) = self.via.get(&cur) {
            edges.push(id);
            let e = g.edge(id).expect("tree edge present");
            cur = match dir {
                Direction::Forward => e.tail,
                Direction::Backward => e.head,
            };
        }
        if dir == Direction::Forward {
            edges.reverse();
        }
        edges
    }
}

/// Multi-source BFS over usable edges, stopping at depth `radius`.
pub fn bfs<U>(
    g: &MultiDigraph,
    sources: impl IntoIterator<Item = VertexId>,
    dir: Direction,
    usable: U,
    radius: Option<usize>,
) -> SearchTree
where
    U: Fn(EdgeId) -> bool,
{
    let mut tree = SearchTree::default();
    let mut queue = VecDeque::new();
    for s in sources {
        if tree.dist.insert(s, 0).is_none() {
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let d = tree.dist[&u];
        if radius.is_some_and(|r| d >= r) {
            continue;
        }
        for (id, w) in dir.step(g, u) {
            if !usable(id) || tree.dist.contains_key(&w) {
                continue;
            }
            tree.dist.insert(w, d + 1);
            tree.via.insert(w, id);
            queue.push_back(w);
        }
    }
    tree
}

/// Shortest walk of length at least one from `sources` to `targets` over
/// usable edges. Sources are not pre-marked, so a source that is also a
/// target is reached only by a genuine closed route.
pub fn shortest_nonempty_path<U>(
    g: &MultiDigraph,
    sources: &[VertexId],
    targets: &[VertexId],
    usable: U,
    max_len: Option<usize>,
) -> Option<Vec<EdgeId>>
where
    U: Fn(EdgeId) -> bool,
{
    let mut is_target = vec![false; g.vertex_count()];
    for t in targets {
        is_target[t.index()] = true;
    }
    let mut sorted: Vec<VertexId> = sources.to_vec();
    sorted.sort();
    sorted.dedup();

    // first edge of each route is taken from a virtual root
    let mut dist: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut via: BTreeMap<VertexId, EdgeId> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for &s in &sorted {
        for (id, w) in Direction::Forward.step(g, s) {
            if usable(id) && !dist.contains_key(&w) {
                dist.insert(w, 1);
                via.insert(w, id);
                queue.push_back(w);
            }
        }
    }
    while let Some(u) = queue.pop_front() {
        let d = dist[&u];
        if max_len.is_some_and(|m| d > m) {
            return None;
        }
        if is_target[u.index()] {
            let mut edges = Vec::new();
            let mut cur = u;
            loop {
                let id = via[&cur];
                edges.push(id);
                let tail = g.edge(id).unwrap().tail;
                if edges.len() == d {
                    break;
                }
                cur = tail;
            }
            edges.reverse();
            return Some(edges);
        }
        for (id, w) in Direction::Forward.step(g, u) {
            if usable(id) && !dist.contains_key(&w) {
                dist.insert(w, d + 1);
                via.insert(w, id);
                queue.push_back(w);
            }
        }
    }
    None
}

/// Shortest path between disjoint vertex sets by alternating forward growth
/// from `sources` and backward growth from `targets` until the balls meet.
///
/// Returns `None` when no route of length at most `max_len` exists.
/// Callers must ensure `sources` and `targets` are disjoint.
pub fn bidirectional_path<U>(
    g: &MultiDigraph,
    sources: &[VertexId],
    targets: &[VertexId],
    usable: U,
    max_len: Option<usize>,
) -> Option<Vec<EdgeId>>
where
    U: Fn(EdgeId) -> bool,
{
    let n = g.vertex_count();
    let mut fdist = vec![usize::MAX; n];
    let mut bdist = vec![usize::MAX; n];
    let mut fvia = vec![None; n];
    let mut bvia = vec![None; n];
    let mut ffront: Vec<VertexId> = Vec::new();
    let mut bfront: Vec<VertexId> = Vec::new();
    for &s in sources {
        if fdist[s.index()] == usize::MAX {
            fdist[s.index()] = 0;
            ffront.push(s);
        }
    }
    for &t in targets {
        if bdist[t.index()] == usize::MAX {
            bdist[t.index()] = 0;
            bfront.push(t);
        }
    }
    ffront.sort();
    bfront.sort();
    let (mut fr, mut br) = (0usize, 0usize);

    let best_meet = |fdist: &[usize], bdist: &[usize]| -> Option<(usize, VertexId)> {
        (0..n)
            .filter(|&v| fdist[v] != usize::MAX && bdist[v] != usize::MAX)
            .map(|v| (fdist[v] + bdist[v], VertexId(v)))
            .min()
    };

    loop {
        if let Some((len, meet)) = best_meet(&fdist, &bdist) {
            if max_len.is_some_and(|m| len > m) {
                return None;
            }
            let mut edges = Vec::with_capacity(len);
            let mut cur = meet;
            while let Some(id) = fvia[cur.index()] {
                edges.push(id);
                cur = g.edge(id).unwrap().tail;
            }
            edges.reverse();
            let mut cur = meet;
            while let Some(id) = bvia[cur.index()] {
                edges.push(id);
                cur = g.edge(id).unwrap().head;
            }
            return Some(edges);
        }
        if max_len.is_some_and(|m| fr + br >= m) {
            return None;
        }
        // a closed ball on either side with no meet means no route at all
        if ffront.is_empty() || bfront.is_empty() {
            return None;
        }
        let forward = ffront.len() <= bfront.len();
        let (front, dist, via, dir, radius) = if forward {
            (&mut ffront, &mut fdist, &mut fvia, Direction::Forward, &mut fr)
        } else {
            (&mut bfront, &mut bdist, &mut bvia, Direction::Backward, &mut br)
        };
        let mut next = Vec::new();
        for &u in front.iter() {
            for (id, w) in dir.step(g, u) {
                if usable(id) && dist[w.index()] == usize::MAX {
                    dist[w.index()] = *radius + 1;
                    via[w.index()] = Some(id);
                    next.push(w);
                }
            }
        }
        next.sort();
        *front = next;
        *radius += 1;
    }
}

/// A shortest directed cycle through usable edges, of length at most
/// `max_len` if given. The returned edges form a vertex-simple cycle.
pub fn shortest_cycle<U>(g: &MultiDigraph, usable: U, max_len: Option<usize>) -> Option<Vec<EdgeId>>
where
    U: Fn(EdgeId) -> bool,
{
    let n = g.vertex_count();
    let mut best: Option<Vec<EdgeId>> = None;
    let mut dist = vec![usize::MAX; n];
    let mut via: Vec<Option<EdgeId>> = vec![None; n];
    let mut touched = Vec::new();
    for s in g.vertices() {
        let cap = match (&best, max_len) {
            (Some(b), _) => b.len() - 1,
            (None, Some(m)) => m,
            (None, None) => n,
        };
        if cap == 0 {
            break;
        }
        for v in touched.drain(..) {
            dist[v] = usize::MAX;
            via[v] = None;
        }
        dist[s.index()] = 0;
        touched.push(s.index());
        let mut queue = VecDeque::from([s]);
        'bfs: while let Some(u) = queue.pop_front() {
            let d = dist[u.index()];
            if d + 1 > cap {
                break;
            }
            for (id, w) in Direction::Forward.step(g, u) {
                if !usable(id) {
                    continue;
                }
                if w == s {
                    let mut edges = vec![id];
                    let mut cur = u;
                    while let Some(e) = via[cur.index()] {
                        edges.push(e);
                        cur = g.edge(e).unwrap().tail;
                    }
                    edges.reverse();
                    best = Some(edges);
                    break 'bfs;
                }
                if dist[w.index()] == usize::MAX {
                    dist[w.index()] = d + 1;
                    via[w.index()] = Some(id);
                    touched.push(w.index());
                    queue.push_back(w);
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path4() -> MultiDigraph {
        MultiDigraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn bfs_respects_radius_and_direction() {
        let g = path4();
        let t = bfs(&g, [VertexId(0)], Direction::Forward, |_| true, Some(2));
        assert_eq!(t.dist.len(), 3);
        assert_eq!(t.path_to(&g, VertexId(2), Direction::Forward), vec![EdgeId(0), EdgeId(1)]);
        let t = bfs(&g, [VertexId(3)], Direction::Backward, |_| true, None);
        assert_eq!(t.dist[&VertexId(0)], 3);
        assert_eq!(
            t.path_to(&g, VertexId(1), Direction::Backward),
            vec![EdgeId(1), EdgeId(2)]
        );
    }

    #[test]
    fn bidirectional_finds_shortest() {
        let g = MultiDigraph::from_edges(5, [(0, 1), (1, 2), (2, 3), (0, 4), (4, 3)]).unwrap();
        let p = bidirectional_path(&g, &[VertexId(0)], &[VertexId(3)], |_| true, None).unwrap();
        assert_eq!(p, vec![EdgeId(3), EdgeId(4)]);
        let p = bidirectional_path(&g, &[VertexId(0)], &[VertexId(3)], |e| e != EdgeId(4), None)
            .unwrap();
        assert_eq!(p.len(), 3);
        assert!(bidirectional_path(&g, &[VertexId(3)], &[VertexId(0)], |_| true, None).is_none());
        assert!(
            bidirectional_path(&g, &[VertexId(0)], &[VertexId(3)], |e| e != EdgeId(4), Some(2))
                .is_none()
        );
    }

    #[test]
    fn nonempty_path_needs_a_cycle_for_shared_endpoint() {
        let g = path4();
        assert!(shortest_nonempty_path(&g, &[VertexId(1)], &[VertexId(1)], |_| true, None).is_none());
        let c = MultiDigraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let p = shortest_nonempty_path(&c, &[VertexId(1)], &[VertexId(1)], |_| true, None).unwrap();
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn shortest_cycle_with_cutoff() {
        let g = MultiDigraph::from_edges(4, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 2)]).unwrap();
        let c = shortest_cycle(&g, |_| true, None).unwrap();
        assert_eq!(c.len(), 2);
        let c = shortest_cycle(&g, |e| e != EdgeId(4), None).unwrap();
        assert_eq!(c.len(), 3);
        assert!(shortest_cycle(&g, |e| e != EdgeId(4), Some(2)).is_none());
        assert!(shortest_cycle(&path4(), |_| true, None).is_none());
    }
}
