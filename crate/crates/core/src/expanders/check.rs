use std::collections::{BTreeMap, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::params::ExpansionParams;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiDigraph, SimpleGraph, VertexId};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionKind {
    EdgeUndirected,
    RobustVertexUndirected,
    EdgeDirected,
    RobustVertexDirected,
}

impl ExpansionKind {
    pub fn is_directed(self) -> bool {
        matches!(self, ExpansionKind::EdgeDirected | ExpansionKind::RobustVertexDirected)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    /// Every vertex subset; limited to [`ExpansionParams::exhaustive_cap`] vertices.
    Exhaustive,
    /// Structured candidates (singletons, components, BFS balls) plus random sets.
    Sampled { seed: u64, trials: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Out,
    In,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForbiddenEdge {
    Pair(VertexId, VertexId),
    Id(EdgeId),
}

/// A set violating the definition, with the adversarial edge set if any.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct Witness<T> {
    pub set: Vec<VertexId>,
    pub forbidden: Vec<ForbiddenEdge>,
    pub side: Option<Side>,
    pub measured: T,
    pub required: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ExpansionReport<T> {
    pub kind: ExpansionKind,
    pub holds: bool,
    pub witness: Option<Witness<T>>,
    pub mode: CheckMode,
    pub sets_checked: usize,
}

/// Graphs the expansion definitions apply to.
pub trait ExpansionSubject {
    const DIRECTED: bool;
    #[doc(hidden)]
    fn frame(&self) -> Frame;
}

/// Compact index view: vertex `i` is `labels[i]`; arcs are grouped by
/// endpoint pair with their multiplicity.
#[doc(hidden)]
#[derive(Clone, Debug)]
pub struct Frame {
    labels: Vec<VertexId>,
    out: Vec<Vec<Arc>>,
    inn: Vec<Vec<Arc>>,
    edges: usize,
}

#[derive(Clone, Debug)]
struct Arc {
    to: usize,
    ids: Vec<EdgeId>,
}

impl ExpansionSubject for SimpleGraph {
    const DIRECTED: bool = false;
    fn frame(&self) -> Frame {
        let labels: Vec<VertexId> = self.vertices().collect();
        let index: BTreeMap<VertexId, usize> =
            labels.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj: Vec<Vec<Arc>> = labels
            .iter()
            .map(|&v| {
                self.neighbours(v)
                    .map(|w| Arc { to: index[&w], ids: Vec::new() })
                    .collect()
            })
            .collect();
        Frame {
            labels,
            inn: adj.clone(),
            out: adj,
            edges: self.edge_count(),
        }
    }
}

impl ExpansionSubject for MultiDigraph {
    const DIRECTED: bool = true;
    fn frame(&self) -> Frame {
        let n = self.vertex_count();
        let mut out: Vec<BTreeMap<usize, Vec<EdgeId>>> = vec![BTreeMap::new(); n];
        let mut inn: Vec<BTreeMap<usize, Vec<EdgeId>>> = vec![BTreeMap::new(); n];
        for (id, e) in self.edges() {
            out[e.tail.0].entry(e.head.0).or_default().push(id);
            inn[e.head.0].entry(e.tail.0).or_default().push(id);
        }
        let pack = |m: Vec<BTreeMap<usize, Vec<EdgeId>>>| {
            m.into_iter()
                .map(|row| row.into_iter().map(|(to, ids)| Arc { to, ids }).collect())
                .collect()
        };
        Frame {
            labels: self.vertices().collect(),
            out: pack(out),
            inn: pack(inn),
            edges: self.edge_count(),
        }
    }
}

impl Arc {
    fn mult(&self) -> usize {
        self.ids.len().max(1)
    }
}

impl Frame {
    fn n(&self) -> usize {
        self.labels.len()
    }

    /// Average degree as the definition of `kind` normalises it.
    fn average_degree<T: Real>(&self, kind: ExpansionKind) -> T {
        let e = T::count(self.edges);
        let n = T::count(self.n());
        if kind.is_directed() {
            e / n
        } else {
            T::lit(2.0) * e / n
        }
    }

    fn boundary(&self, inside: &[bool], side: Side) -> usize {
        let rows = match side {
            Side::Out => &self.out,
            Side::In => &self.inn,
        };
        (0..self.n())
            .filter(|&v| inside[v])
            .flat_map(|v| rows[v].iter())
            .filter(|a| !inside[a.to])
            .map(Arc::mult)
            .sum()
    }

    /// Smallest neighbourhood an adversary with `budget` edges can leave,
    /// and the edges it deletes. Killing the cheapest neighbours first is
    /// optimal because each neighbour costs its own edge count.
    fn robust_neighbourhood<T: Real>(
        &self,
        inside: &[bool],
        side: Side,
        budget: T,
    ) -> (usize, Vec<ForbiddenEdge>) {
        let rows = match side {
            Side::Out => &self.out,
            Side::In => &self.inn,
        };
        let mut cost: BTreeMap<usize, Vec<(usize, &Arc)>> = BTreeMap::new();
        for v in (0..self.n()).filter(|&v| inside[v]) {
            for a in rows[v].iter().filter(|a| !inside[a.to]) {
                cost.entry(a.to).or_default().push((v, a));
            }
        }
        let mut by_cost: Vec<(usize, usize)> = cost
            .iter()
            .map(|(&y, arcs)| (arcs.iter().map(|(_, a)| a.mult()).sum(), y))
            .collect();
        by_cost.sort();
        let mut spent = 0usize;
        let mut forbidden = Vec::new();
        let mut killed = 0;
        for (c, y) in by_cost.iter().copied() {
            if T::count(spent + c) > budget + T::tolerance() {
                break;
            }
            spent += c;
            killed += 1;
            for (v, a) in &cost[&y] {
                if a.ids.is_empty() {
                    forbidden.push(ForbiddenEdge::Pair(self.labels[*v], self.labels[y]));
                } else {
                    forbidden.extend(a.ids.iter().map(|&id| ForbiddenEdge::Id(id)));
                }
            }
        }
        (by_cost.len() - killed, forbidden)
    }

    fn evaluate<T: Real>(
        &self,
        p: &ExpansionParams<T>,
        kind: ExpansionKind,
        inside: &[bool],
    ) -> Option<Witness<T>> {
        let s = inside.iter().filter(|&&b| b).count();
        if s == 0 || 2 * s > self.n() {
            return None;
        }
        let s_t = T::count(s);
        let rho = p.rho(s_t);
        if rho == T::zero() {
            return None;
        }
        let d = self.average_degree::<T>(kind);
        let c = &p.constants;
        let set = || {
            (0..self.n())
                .filter(|&v| inside[v])
                .map(|v| self.labels[v])
                .collect::<Vec<_>>()
        };
        let sides: &[Side] = if kind.is_directed() {
            &[Side::Out, Side::In]
        } else {
            &[Side::Out]
        };
        for &side in sides {
            let (measured, required, forbidden) = match kind {
                ExpansionKind::EdgeUndirected | ExpansionKind::EdgeDirected => {
                    let factor = if kind.is_directed() {
                        c.edge_factor_directed
                    } else {
                        c.edge_factor_undirected
                    };
                    let m = T::count(self.boundary(inside, side));
                    (m, factor * d * rho * s_t, Vec::new())
                }
                ExpansionKind::RobustVertexUndirected | ExpansionKind::RobustVertexDirected => {
                    let factor = if kind.is_directed() {
                        c.vertex_factor_directed
                    } else {
                        c.vertex_factor_undirected
                    };
                    let (left, f) = self.robust_neighbourhood(inside, side, d * rho * s_t);
                    (T::count(left), factor * rho * s_t, f)
                }
            };
            if !measured.at_least(required) {
                return Some(Witness {
                    set: set(),
                    forbidden,
                    side: kind.is_directed().then_some(side),
                    measured,
                    required,
                });
            }
        }
        None
    }

    fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let order = self.bfs_order(s, &mut seen);
            comps.push(order);
        }
        comps
    }

    fn bfs_order(&self, s: usize, seen: &mut [bool]) -> Vec<usize> {
        let mut order = vec![s];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for a in self.out[u].iter().chain(&self.inn[u]) {
                if !seen[a.to] {
                    seen[a.to] = true;
                    order.push(a.to);
                    queue.push_back(a.to);
                }
            }
        }
        order
    }

    /// Candidate sets for sampled probing, in a fixed order.
    fn candidates(&self, seed: u64, trials: usize) -> Vec<Vec<usize>> {
        let n = self.n();
        let half = n / 2;
        let mut out: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
        for c in self.components() {
            if c.len() <= half {
                out.push(c);
            }
        }
        for v in 0..n {
            let order = self.bfs_order(v, &mut vec![false; n]);
            let mut size = 2;
            while size <= half.min(order.len()) {
                out.push(order[..size].to_vec());
                size *= 2;
            }
            if half >= 2 && order.len() >= half {
                out.push(order[..half].to_vec());
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut all: Vec<usize> = (0..n).collect();
        for _ in 0..trials {
            if half == 0 {
                break;
            }
            let size = rng.gen_range(1..=half);
            all.shuffle(&mut rng);
            out.push(all[..size].to_vec());
        }
        out
    }
}

fn mask_to_set(mask: u32, n: usize) -> Vec<bool> {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}

/// Tests one of the four expansion definitions on `g`.
///
/// The directed robust vertex definition is checked on sets of at most half
/// the vertices, like the others: with `X = V` no vertex lies outside `X`,
/// so the uncapped form could never hold.
pub fn check_expansion<G: ExpansionSubject, T: Real>(
    g: &G,
    p: &ExpansionParams<T>,
    kind: ExpansionKind,
    mode: CheckMode,
) -> Result<ExpansionReport<T>> {
    if kind.is_directed() != G::DIRECTED {
        return Err(Error::input(format!(
            "{kind:?} does not apply to this kind of graph"
        )));
    }
    let frame = g.frame();
    let n = frame.n();
    let mut witness: Option<Witness<T>> = None;
    let mut checked = 0usize;
    match mode {
        CheckMode::Exhaustive => {
            if n > p.exhaustive_cap || n >= 32 {
                return Err(Error::input(format!(
                    "{n} vertices exceed the exhaustive cap of {}",
                    p.exhaustive_cap
                )));
            }
            let mut best_key: Option<Vec<usize>> = None;
            for mask in 1u32..(1u32 << n) {
                if 2 * mask.count_ones() as usize > n {
                    continue;
                }
                checked += 1;
                let inside = mask_to_set(mask, n);
                if let Some(w) = frame.evaluate(p, kind, &inside) {
                    let key: Vec<usize> = (0..n).filter(|&i| inside[i]).collect();
                    if best_key.as_ref().is_none_or(|b| key < *b) {
                        best_key = Some(key);
                        witness = Some(w);
                    }
                }
            }
        }
        CheckMode::Sampled { seed, trials } => {
            for set in frame.candidates(seed, trials) {
                checked += 1;
                let mut inside = vec![false; n];
                for v in set {
                    inside[v] = true;
                }
                if let Some(w) = frame.evaluate(p, kind, &inside) {
                    witness = Some(w);
                    break;
                }
            }
        }
    }
    Ok(ExpansionReport {
        kind,
        holds: witness.is_none(),
        witness,
        mode,
        sets_checked: checked,
    })
}

/// Exhaustive when `g` is within the cap, sampled otherwise.
pub fn check_expansion_auto<G: ExpansionSubject, T: Real>(
    g: &G,
    p: &ExpansionParams<T>,
    kind: ExpansionKind,
    seed: u64,
    trials: usize,
) -> Result<ExpansionReport<T>> {
    let mode = if g.frame().n() <= p.exhaustive_cap {
        CheckMode::Exhaustive
    } else {
        CheckMode::Sampled { seed, trials }
    };
    check_expansion(g, p, kind, mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles() -> SimpleGraph {
        SimpleGraph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    fn complete_digraph(n: usize) -> MultiDigraph {
        MultiDigraph::from_edges(
            n,
            (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))),
        )
        .unwrap()
    }

    #[test]
    fn disconnected_triangles_fail() {
        for t in [1.0, 2.0, 3.0] {
            let p = ExpansionParams::new(t);
            let r = check_expansion(&two_triangles(), &p, ExpansionKind::EdgeUndirected, CheckMode::Exhaustive)
                .unwrap();
            assert!(!r.holds);
            let w = r.witness.unwrap();
            assert_eq!(w.set, vec![VertexId(0), VertexId(1), VertexId(2)]);
            assert_eq!(w.measured, 0.0);
            let s = check_expansion(
                &two_triangles(),
                &p,
                ExpansionKind::EdgeUndirected,
                CheckMode::Sampled { seed: 1, trials: 10 },
            )
            .unwrap();
            assert!(!s.holds);
        }
    }

    #[test]
    fn complete_digraph_expands() {
        let p = ExpansionParams::new(1.0);
        for kind in [ExpansionKind::EdgeDirected, ExpansionKind::RobustVertexDirected] {
            let r = check_expansion(&complete_digraph(6), &p, kind, CheckMode::Exhaustive).unwrap();
            assert!(r.holds, "{kind:?}");
            assert_eq!(r.sets_checked, 6 + 15 + 20);
        }
    }

    #[test]
    fn two_cycle_edge_expands() {
        let g = MultiDigraph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        let p = ExpansionParams::new(1.0);
        let r = check_expansion(&g, &p, ExpansionKind::EdgeDirected, CheckMode::Exhaustive).unwrap();
        assert!(r.holds);
    }

    #[test]
    fn kind_must_match_graph() {
        let p = ExpansionParams::new(1.0);
        assert!(check_expansion(&two_triangles(), &p, ExpansionKind::EdgeDirected, CheckMode::Exhaustive).is_err());
    }

    #[test]
    fn exhaustive_cap_enforced() {
        let p = ExpansionParams::new(1.0);
        let big = SimpleGraph::complete(17);
        assert!(matches!(
            check_expansion(&big, &p, ExpansionKind::EdgeUndirected, CheckMode::Exhaustive),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn robust_adversary_is_recheckable() {
        // a path: killing the single outside neighbour of an end is cheap
        let g = SimpleGraph::from_edges(8, (0..7).map(|i| (i, i + 1))).unwrap();
        let mut p = ExpansionParams::new(1.0);
        p.constants.rho_denom = 0.25;
        let r = check_expansion(&g, &p, ExpansionKind::RobustVertexUndirected, CheckMode::Exhaustive)
            .unwrap();
        let w = r.witness.expect("a path is not a robust expander");
        let budget = 2.0 * 7.0 / 8.0 * p.rho(w.set.len() as f64) * w.set.len() as f64;
        assert!(w.forbidden.len() as f64 <= budget + 1e-9);
        assert!(w.measured < w.required);
    }
}
