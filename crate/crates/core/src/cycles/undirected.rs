use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{SimpleGraph, VertexId};

/// Search nodes allowed per branch-set size in the exact search.
const EXACT_BUDGET: usize = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CliqueStrategy {
    Exact,
    Greedy,
}

/// Edge-disjoint paths joining every pair of branch vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UndirectedCliqueImmersion {
    pub strategy: CliqueStrategy,
    /// False when the exact search ran out of budget, so `s` may not be maximum.
    pub exhaustive: bool,
    pub branch: Vec<VertexId>,
    /// Keyed by branch indices `(i, j)` with `i < j`; runs from `branch[i]` to `branch[j]`.
    pub paths: BTreeMap<(usize, usize), Vec<VertexId>>,
}

impl UndirectedCliqueImmersion {
    pub fn s(&self) -> usize {
        self.branch.len()
    }

    pub fn verify(&self, g: &SimpleGraph) -> Result<()> {
        let s = self.branch.len();
        if self.branch.iter().collect::<BTreeSet<_>>().len() != s {
            return Err(Error::input("branch vertices repeat"));
        }
        if self.paths.len() != s * s.saturating_sub(1) / 2 {
            return Err(Error::input(format!("{} paths for {s} branch vertices", self.paths.len())));
        }
        let mut used = BTreeSet::new();
        for (&(i, j), path) in &self.paths {
            if i >= j || j >= s {
                return Err(Error::input(format!("bad pair ({i}, {j})")));
            }
            if path.first() != Some(&self.branch[i]) || path.last() != Some(&self.branch[j]) || path.len() < 2 {
                return Err(Error::input(format!("path for ({i}, {j}) has wrong ends")));
            }
            for w in path.windows(2) {
                if !g.has_edge(w[0], w[1]) {
                    return Err(Error::input(format!("{{{}, {}}} is not an edge", w[0], w[1])));
                }
                if !used.insert((w[0].min(w[1]), w[0].max(w[1]))) {
                    return Err(Error::input(format!("edge {{{}, {}}} used twice", w[0], w[1])));
                }
            }
        }
        Ok(())
    }
}

/// A large clique immersion: exact search when `g` has at most `exact_cap`
/// vertices, a greedy construction otherwise.
pub fn undirected_clique_immersion(g: &SimpleGraph, exact_cap: usize) -> UndirectedCliqueImmersion {
    if g.vertex_count() <= exact_cap.min(10) {
        exact(g)
    } else {
        greedy(g)
    }
}

struct Exact<'a> {
    vs: Vec<VertexId>,
    idx: BTreeMap<(usize, usize), usize>,
    adj: Vec<Vec<usize>>,
    budget: usize,
    g: &'a SimpleGraph,
}

impl Exact<'_> {
    fn edge(&self, a: usize, b: usize) -> usize {
        self.idx[&(a.min(b), a.max(b))]
    }

    fn free_degree(&self, v: usize, used: u64) -> usize {
        self.adj[v].iter().filter(|&&w| used >> self.edge(v, w) & 1 == 0).count()
    }

    fn route(&mut self, branch: &[usize], pairs: &[(usize, usize)], k: usize, used: u64, out: &mut Vec<Vec<usize>>) -> bool {
        if k == pairs.len() {
            return true;
        }
        if self.budget == 0 {
            return false;
        }
        self.budget -= 1;
        for &b in branch {
            let need = pairs[k..].iter().filter(|&&(x, y)| branch[x] == b || branch[y] == b).count();
            if self.free_degree(b, used) < need {
                return false;
            }
        }
        let (a, b) = (branch[pairs[k].0], branch[pairs[k].1]);
        let mut path = vec![a];
        let mut on = 1u64 << a;
        self.paths(branch, pairs, k, a, b, used, &mut path, &mut on, out)
    }

    #[allow(clippy::too_many_arguments)]
    fn paths(
        &mut self,
        branch: &[usize],
        pairs: &[(usize, usize)],
        k: usize,
        at: usize,
        target: usize,
        used: u64,
        path: &mut Vec<usize>,
        on: &mut u64,
        out: &mut Vec<Vec<usize>>,
    ) -> bool {
        if self.budget == 0 {
            return false;
        }
        self.budget -= 1;
        let mut next: Vec<usize> = self.adj[at].clone();
        // try the target first so direct edges are preferred
        next.sort_by_key(|&w| (w != target, w));
        for w in next {
            let e = self.edge(at, w);
            if used >> e & 1 == 1 || *on >> w & 1 == 1 {
                continue;
            }
            path.push(w);
            let used = used | 1 << e;
            if w == target {
                out.push(path.clone());
                if self.route(branch, pairs, k + 1, used, out) {
                    return true;
                }
                out.pop();
            } else {
                *on |= 1 << w;
                if self.paths(branch, pairs, k, w, target, used, path, on, out) {
                    return true;
                }
                *on &= !(1 << w);
            }
            path.pop();
        }
        false
    }
}

fn subsets(n: usize, s: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).filter(move |m| m.count_ones() as usize == s).map(move |m| (0..n).filter(|i| m >> i & 1 == 1).collect())
}

fn exact(g: &SimpleGraph) -> UndirectedCliqueImmersion {
    let vs: Vec<VertexId> = g.vertices().collect();
    let pos: BTreeMap<VertexId, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut idx = BTreeMap::new();
    for (u, v) in g.edges() {
        let (a, b) = (pos[&u], pos[&v]);
        let k = idx.len();
        idx.insert((a.min(b), a.max(b)), k);
    }
    let adj = vs.iter().map(|v| g.neighbours(*v).map(|w| pos[&w]).collect()).collect();
    let mut search = Exact {
        vs,
        idx,
        adj,
        budget: 0,
        g,
    };
    let n = search.vs.len();
    let mut exhaustive = true;
    for s in (2..=n).rev() {
        let pairs: Vec<(usize, usize)> = (0..s).flat_map(|i| (i + 1..s).map(move |j| (i, j))).collect();
        if pairs.len() > search.idx.len() {
            continue;
        }
        search.budget = EXACT_BUDGET;
        for branch in subsets(n, s) {
            if branch.iter().any(|&b| search.g.degree(search.vs[b]) < s - 1) {
                continue;
            }
            let mut out = Vec::new();
            if search.route(&branch, &pairs, 0, 0, &mut out) {
                let paths = pairs
                    .iter()
                    .zip(out)
                    .map(|(&p, path)| (p, path.into_iter().map(|i| search.vs[i]).collect()))
                    .collect();
                return UndirectedCliqueImmersion {
                    strategy: CliqueStrategy::Exact,
                    exhaustive,
                    branch: branch.iter().map(|&i| search.vs[i]).collect(),
                    paths,
                };
            }
        }
        if search.budget == 0 {
            exhaustive = false;
        }
    }
    UndirectedCliqueImmersion {
        strategy: CliqueStrategy::Exact,
        exhaustive,
        branch: search.vs.first().copied().into_iter().collect(),
        paths: BTreeMap::new(),
    }
}

fn key(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    (u.min(v), u.max(v))
}

fn bfs_path(
    g: &SimpleGraph,
    from: VertexId,
    to: VertexId,
    used: &BTreeSet<(VertexId, VertexId)>,
    blocked: &BTreeSet<VertexId>,
) -> Option<Vec<VertexId>> {
    let mut prev = BTreeMap::from([(from, from)]);
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = prev[&cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        if u != from && blocked.contains(&u) {
            continue;
        }
        for w in g.neighbours(u) {
            if used.contains(&key(u, w)) || prev.contains_key(&w) {
                continue;
            }
            prev.insert(w, u);
            queue.push_back(w);
        }
    }
    None
}

/// Adds vertices in decreasing degree order, joining each new one to every
/// earlier branch vertex by a shortest unused path, and skips any vertex
/// that cannot be joined.
fn greedy(g: &SimpleGraph) -> UndirectedCliqueImmersion {
    let mut order: Vec<VertexId> = g.vertices().collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut branch: Vec<VertexId> = Vec::new();
    let mut paths = BTreeMap::new();
    let mut used = BTreeSet::new();
    for v in order {
        let free = g.neighbours(v).filter(|&w| !used.contains(&key(v, w))).count();
        if free < branch.len() {
            continue;
        }
        let mut trial_used = used.clone();
        let mut trial = Vec::new();
        let blocked: BTreeSet<VertexId> = branch.iter().copied().chain([v]).collect();
        let mut ok = true;
        for (i, &b) in branch.iter().enumerate() {
            let found = bfs_path(g, b, v, &trial_used, &blocked).or_else(|| bfs_path(g, b, v, &trial_used, &BTreeSet::new()));
            match found {
                Some(p) => {
                    trial_used.extend(p.windows(2).map(|w| key(w[0], w[1])));
                    trial.push(((i, branch.len()), p));
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            used = trial_used;
            paths.extend(trial);
            branch.push(v);
        }
    }
    UndirectedCliqueImmersion {
        strategy: CliqueStrategy::Greedy,
        exhaustive: false,
        branch,
        paths,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_is_its_own_clique() {
        let g = SimpleGraph::complete(4);
        let c = undirected_clique_immersion(&g, 8);
        assert_eq!(c.s(), 4);
        assert!(c.exhaustive);
        assert!(c.paths.values().all(|p| p.len() == 2));
        c.verify(&g).unwrap();
    }

    #[test]
    fn five_cycle() {
        let g = SimpleGraph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        let c = undirected_clique_immersion(&g, 8);
        // degree 2 caps s at 3, and two arcs plus an edge give a triangle
        assert_eq!(c.s(), 3);
        c.verify(&g).unwrap();
    }

    #[test]
    fn k5_minus_an_edge() {
        let mut g = SimpleGraph::complete(5);
        g.remove_edge(VertexId(0), VertexId(1));
        let c = undirected_clique_immersion(&g, 8);
        // 9 edges rule out K5
        assert_eq!(c.s(), 4);
        c.verify(&g).unwrap();
    }

    #[test]
    fn greedy_on_large_complete_graph() {
        let g = SimpleGraph::complete(12);
        let c = undirected_clique_immersion(&g, 8);
        assert_eq!(c.strategy, CliqueStrategy::Greedy);
        assert_eq!(c.s(), 12);
        c.verify(&g).unwrap();
    }

    #[test]
    fn tampered_paths_fail() {
        let g = SimpleGraph::complete(3);
        let mut c = undirected_clique_immersion(&g, 8);
        c.paths.insert((0, 1), vec![c.branch[0], c.branch[2], c.branch[1]]);
        assert!(c.verify(&g).is_err());
    }
}
