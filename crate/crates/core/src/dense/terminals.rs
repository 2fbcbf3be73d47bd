use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiDigraph, VertexId};
use crate::search::{bfs, Direction};

/// Source and sink terminals that are far apart in the underlying graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminalSystem {
    pub sources: Vec<VertexId>,
    pub sinks: Vec<VertexId>,
    pub radius: usize,
    /// Undirected ball of `radius` around each terminal.
    pub balls: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl TerminalSystem {
    pub fn terminals(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.sources.iter().chain(&self.sinks).copied()
    }

    pub fn ball(&self, v: VertexId) -> &BTreeSet<VertexId> {
        &self.balls[&v]
    }

    /// Rechecks separation with a fresh BFS in the underlying graph.
    pub fn verify(&self, g: &MultiDigraph) -> Result<()> {
        let n = g.vertex_count();
        let mut adj = vec![BTreeSet::new(); n];
        for (_, e) in g.edges() {
            if e.tail != e.head {
                adj[e.tail.0].insert(e.head.0);
                adj[e.head.0].insert(e.tail.0);
            }
        }
        let all: Vec<VertexId> = self.terminals().collect();
        let distinct: BTreeSet<VertexId> = all.iter().copied().collect();
        if distinct.len() != all.len() {
            return Err(Error::internal("terminal chosen twice"));
        }
        for &t in &all {
            if t.0 >= n {
                return Err(Error::internal(format!("terminal {t} out of range")));
            }
            let mut dist = vec![usize::MAX; n];
            dist[t.0] = 0;
            let mut queue = VecDeque::from([t.0]);
            while let Some(u) = queue.pop_front() {
                if dist[u] == 2 * self.radius {
                    continue;
                }
                for &w in &adj[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
            for &o in &all {
                if o != t && dist[o.0] <= 2 * self.radius {
                    return Err(Error::internal(format!(
                        "terminals {t} and {o} at distance {} <= 2r",
                        dist[o.0]
                    )));
                }
            }
            let ball: BTreeSet<VertexId> = (0..n)
                .filter(|&v| dist[v] <= self.radius)
                .map(VertexId)
                .collect();
            if self.balls.get(&t) != Some(&ball) {
                return Err(Error::internal(format!("stored ball of {t} is wrong")));
            }
        }
        Ok(())
    }
}

/// Out- and in-degrees in the canonical orientation of the underlying graph.
pub(crate) fn oriented_degrees(g: &MultiDigraph) -> (Vec<usize>, Vec<usize>) {
    let n = g.vertex_count();
    let (mut out, mut inn) = (vec![0; n], vec![0; n]);
    for id in g.canonical_orientation().into_values() {
        let e = g.edge(id).expect("orientation edge present");
        out[e.tail.0] += 1;
        inn[e.head.0] += 1;
    }
    (out, inn)
}

/// Greedy choice of `k` sources of high out-degree and `k` sinks of high
/// in-degree, each outside the `2r`-balls of those already chosen.
pub fn separated_terminals(
    g: &MultiDigraph,
    k: usize,
    r: usize,
    out_threshold: usize,
    in_threshold: usize,
) -> Result<TerminalSystem> {
    if k == 0 {
        return Err(Error::precondition("k must be positive"));
    }
    let u = g.underlying_simple();
    let (out, inn) = oriented_degrees(g);
    let mut blocked: BTreeSet<VertexId> = BTreeSet::new();
    let mut pick = |qualifies: &dyn Fn(VertexId) -> bool, side: &str, already: usize| {
        let mut chosen = Vec::with_capacity(k);
        for v in g.vertices() {
            if chosen.len() == k {
                break;
            }
            if blocked.contains(&v) || !qualifies(v) {
                continue;
            }
            chosen.push(v);
            blocked.extend(u.ball(v, 2 * r).into_keys());
        }
        if chosen.len() < k {
            return Err(Error::hypothesis(
                "terminals",
                format!(
                    "placed {} of {} {side} terminals ({} terminals in total) at radius {r}",
                    chosen.len(),
                    k,
                    already + chosen.len()
                ),
            ));
        }
        Ok(chosen)
    };
    let sources = pick(&|v| out[v.0] >= out_threshold, "source", 0)?;
    let sinks = pick(&|v| inn[v.0] >= in_threshold, "sink", k)?;
    let balls = sources
        .iter()
        .chain(&sinks)
        .map(|&t| (t, u.ball(t, r).into_keys().collect()))
        .collect();
    let system = TerminalSystem {
        sources,
        sinks,
        radius: r,
        balls,
    };
    system.verify(g)?;
    Ok(system)
}

/// Layers `X_1..X_r` of vertices other than `x` within distance `i` of `x`
/// (in the given direction) in `g` minus `forbidden` and `forbidden_prime`.
pub fn grow_ball(
    g: &MultiDigraph,
    x: VertexId,
    direction: Direction,
    forbidden: &BTreeSet<EdgeId>,
    forbidden_prime: &BTreeSet<EdgeId>,
    r: usize,
) -> Vec<BTreeSet<VertexId>> {
    let tree = bfs(
        g,
        [x],
        direction,
        |id| !forbidden.contains(&id) && !forbidden_prime.contains(&id),
        Some(r),
    );
    (1..=r)
        .map(|i| {
            tree.dist
                .iter()
                .filter(|&(&v, &d)| v != x && d <= i)
                .map(|(&v, _)| v)
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> MultiDigraph {
        MultiDigraph::from_edges(
            n,
            (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))),
        )
        .unwrap()
    }

    fn bidirected_cycle(n: usize) -> MultiDigraph {
        MultiDigraph::from_edges(n, (0..n).flat_map(|i| [(i, (i + 1) % n), ((i + 1) % n, i)])).unwrap()
    }

    fn undirected_distance(g: &MultiDigraph, a: VertexId, b: VertexId) -> usize {
        g.underlying_simple().ball(a, g.vertex_count())[&b]
    }

    #[test]
    fn cycle_terminals_are_separated() {
        let g = bidirected_cycle(100);
        let ts = separated_terminals(&g, 2, 1, 1, 1).unwrap();
        assert_eq!((ts.sources.len(), ts.sinks.len()), (2, 2));
        let all: Vec<_> = ts.terminals().collect();
        for (i, &a) in all.iter().enumerate() {
            for &b in &all[i + 1..] {
                assert!(undirected_distance(&g, a, b) >= 3);
            }
            assert_eq!(ts.ball(a).len(), 3);
        }
    }

    #[test]
    fn complete_digraph_too_small() {
        let err = separated_terminals(&complete(6), 2, 1, 1, 1).unwrap_err();
        assert!(matches!(err, Error::HypothesisNotMet { .. }), "{err}");
        assert!(err.to_string().contains("placed 1 of 2"));
    }

    #[test]
    fn one_pair_at_radius_zero() {
        let g = complete(4);
        let ts = separated_terminals(&g, 1, 0, 1, 1).unwrap();
        assert_ne!(ts.sources[0], ts.sinks[0]);
        assert_eq!(ts.ball(ts.sources[0]).len(), 1);
    }

    #[test]
    fn degree_threshold_filters() {
        // canonical orientation of the bidirected triangle is 0->1, 0->2, 1->2
        let g = bidirected_cycle(3);
        let ts = separated_terminals(&g, 1, 0, 2, 2).unwrap();
        assert_eq!(ts.sources, vec![VertexId(0)]);
        assert_eq!(ts.sinks, vec![VertexId(2)]);
    }

    #[test]
    fn tampered_system_fails_verification() {
        let g = bidirected_cycle(20);
        let mut ts = separated_terminals(&g, 2, 2, 1, 1).unwrap();
        ts.sinks[0] = VertexId(ts.sources[0].0 + 1);
        assert!(ts.verify(&g).is_err());
    }

    #[test]
    fn ball_layers() {
        let k8 = complete(8);
        let none = BTreeSet::new();
        let layers = grow_ball(&k8, VertexId(0), Direction::Forward, &none, &none, 1);
        assert_eq!(layers, vec![(1..8).map(VertexId).collect::<BTreeSet<_>>()]);

        let path = MultiDigraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let layers = grow_ball(&path, VertexId(0), Direction::Forward, &none, &none, 2);
        assert_eq!(layers[0], BTreeSet::from([VertexId(1)]));
        assert_eq!(layers[1], BTreeSet::from([VertexId(1), VertexId(2)]));
        let back = grow_ball(&path, VertexId(2), Direction::Backward, &none, &none, 2);
        assert_eq!(back[1], BTreeSet::from([VertexId(0), VertexId(1)]));

        let outs: BTreeSet<EdgeId> = k8.out_edges(VertexId(0)).collect();
        let layers = grow_ball(&k8, VertexId(0), Direction::Forward, &outs, &none, 3);
        assert!(layers.iter().all(BTreeSet::is_empty));
    }
}
