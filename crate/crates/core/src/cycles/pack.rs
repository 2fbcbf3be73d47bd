use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::simple_edges::count_simple;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiDigraph, VertexId};
use crate::immersion::{LiftedGraph, Trail};
use crate::scalar::Real;
use crate::search::shortest_cycle;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizeStats {
    pub splits: usize,
    /// Antiparallel multiple pairs `a⇒b⇒a` resolved by deleting one copy of each.
    pub deletions: usize,
}

/// Vertices with a multiple in-edge and with a multiple out-edge.
pub fn multi_in_out(g: &MultiDigraph) -> (BTreeSet<VertexId>, BTreeSet<VertexId>) {
    let mut ins = BTreeSet::new();
    let mut outs = BTreeSet::new();
    for ((a, b), m) in g.multiplicities() {
        if m >= 2 {
            outs.insert(a);
            ins.insert(b);
        }
    }
    (ins, outs)
}

pub fn is_normalized(g: &MultiDigraph) -> bool {
    let (ins, outs) = multi_in_out(g);
    ins.is_disjoint(&outs)
}

/// Splits consecutive multiple edges `x⇒y⇒z` into `x→z` until no vertex has
/// both a multiple in-edge and a multiple out-edge.
pub fn normalize_multiedges(lg: &LiftedGraph) -> Result<(LiftedGraph, NormalizeStats)> {
    if !lg.current().is_eulerian() {
        return Err(Error::precondition("graph is not Eulerian"));
    }
    let mut lg = lg.clone();
    let mut stats = NormalizeStats::default();
    loop {
        let g = lg.current();
        let mult = g.multiplicities();
        let mut step = None;
        'scan: for y in g.vertices() {
            for x in g.in_neighbours(y) {
                if mult.get(&(x, y)).copied().unwrap_or(0) < 2 {
                    continue;
                }
                for z in g.out_neighbours(y) {
                    if mult.get(&(y, z)).copied().unwrap_or(0) >= 2 {
                        step = Some((x, y, z));
                        break 'scan;
                    }
                }
            }
        }
        let Some((x, y, z)) = step else { break };
        let e1 = g.parallel_copies(x, y)[0];
        let e2 = g.parallel_copies(y, z)[0];
        if x == z {
            lg.delete_edges(&[e1, e2])?;
            stats.deletions += 1;
        } else {
            lg.split(e1, e2)?;
            stats.splits += 1;
        }
    }
    debug_assert!(lg.current().is_eulerian() && is_normalized(lg.current()));
    Ok((lg, stats))
}

/// Diagnostics recorded before choosing each cycle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PackStep {
    /// Vertices on at least αn/4 earlier cycles.
    pub heavy: usize,
    /// Vertices with at least αn/16 out-edges into the heavy set.
    pub feeders: usize,
    /// Feeders without a multiple out-edge.
    pub feeders_outside: usize,
    /// Minimum out-degree after removing used edges, heavy vertices and feeders.
    pub depleted_min_out: Option<usize>,
    pub cycle_len: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CyclePack {
    pub cycles: Vec<Trail>,
    /// A simple edge on each cycle.
    pub chosen: Vec<EdgeId>,
    pub length_cap: usize,
    pub steps: Vec<PackStep>,
}

impl CyclePack {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Closed, pairwise edge-disjoint, within the cap, and each chosen edge
    /// lies on its cycle with multiplicity one.
    pub fn check(&self, g: &MultiDigraph) -> Result<()> {
        if self.chosen.len() != self.cycles.len() {
            return Err(Error::input("one chosen edge per cycle"));
        }
        let mut used = BTreeSet::new();
        for (c, &e) in self.cycles.iter().zip(&self.chosen) {
            let t = Trail::new(g, c.edges().to_vec())?;
            if !t.is_closed() || t.len() > self.length_cap {
                return Err(Error::input(format!("cycle of length {} is open or too long", t.len())));
            }
            for &id in t.edges() {
                if !used.insert(id) {
                    return Err(Error::input(format!("edge {id} lies on two cycles")));
                }
            }
            if !t.edges().contains(&e) || count_simple(g, &[e])? != 1 {
                return Err(Error::input(format!("chosen edge {e} is not a simple edge of its cycle")));
            }
        }
        Ok(())
    }
}

/// ⌈64/α⌉.
pub fn pack_length_cap<T: Real>(alpha: T) -> usize {
    (T::lit(64.0) / alpha - T::tolerance()).ceil().to_usize().unwrap_or(usize::MAX)
}

/// Repeatedly removes a shortest cycle of the remaining graph. With `ell`
/// set, fails unless `ell` cycles of length at most ⌈64/α⌉ are found;
/// otherwise packs until none is left within that length.
pub fn pack_cycles<T: Real>(g: &MultiDigraph, ell: Option<usize>, alpha: T, strict: bool) -> Result<CyclePack> {
    if !(alpha > T::zero() && alpha <= T::one()) {
        return Err(Error::precondition(format!("alpha = {alpha} is not in (0, 1]")));
    }
    if !g.is_eulerian() {
        return Err(Error::precondition("graph is not Eulerian"));
    }
    if !is_normalized(g) {
        return Err(Error::precondition("a vertex has both multiple in- and out-edges"));
    }
    let n = g.vertex_count();
    let an = alpha * T::count(n);
    if strict {
        let delta = g.underlying_simple().min_degree();
        if !T::count(delta).at_least(an) {
            return Err(Error::precondition(format!("underlying minimum degree {delta} is below {an}")));
        }
    }
    let cap = pack_length_cap(alpha);
    let (_, v_plus) = multi_in_out(g);
    let mut used: BTreeSet<EdgeId> = BTreeSet::new();
    let mut on_cycles = vec![0usize; n];
    let mut pack = CyclePack {
        cycles: Vec::new(),
        chosen: Vec::new(),
        length_cap: cap,
        steps: Vec::new(),
    };
    let quarter = an / T::lit(4.0);
    let sixteenth = an / T::lit(16.0);
    while ell.is_none_or(|l| pack.len() < l) {
        let heavy: BTreeSet<VertexId> = g
            .vertices()
            .filter(|v| T::count(on_cycles[v.0]).at_least(quarter))
            .collect();
        let mut into_heavy: BTreeMap<VertexId, usize> = BTreeMap::new();
        for (_, e) in g.edges() {
            if heavy.contains(&e.head) {
                *into_heavy.entry(e.tail).or_default() += 1;
            }
        }
        let feeders: BTreeSet<VertexId> = into_heavy
            .iter()
            .filter(|&(_, &d)| !heavy.is_empty() && T::count(d).at_least(sixteenth))
            .map(|(&v, _)| v)
            .collect();
        let feeders_outside = feeders.difference(&v_plus).count();
        if strict && feeders_outside > 0 {
            return Err(Error::internal(format!(
                "{feeders_outside} vertices without multiple out-edges send αn/16 edges into {} heavy vertices",
                heavy.len()
            )));
        }
        let gone = |v: &VertexId| heavy.contains(v) || feeders.contains(v);
        let depleted_min_out = g
            .vertices()
            .filter(|v| !gone(v))
            .map(|v| {
                g.out_edges(v)
                    .filter(|id| !used.contains(id) && !gone(&g.edge(*id).expect("live edge").head))
                    .count()
            })
            .min();

        let Some(edges) = shortest_cycle(g, |id| !used.contains(&id), Some(cap)) else {
            if let Some(l) = ell {
                return Err(Error::hypothesis(
                    "pack",
                    format!("found {} of {l} edge-disjoint cycles of length at most {cap}", pack.len()),
                ));
            }
            break;
        };
        let mut simple = Vec::new();
        for &id in &edges {
            let e = g.endpoints(id)?;
            if g.multiplicity(e.tail, e.head) == 1 {
                simple.push((e.tail, e.head, id));
            }
        }
        let chosen = simple
            .into_iter()
            .min()
            .map(|(_, _, id)| id)
            .ok_or_else(|| Error::internal("cycle consists of multiple edges only"))?;
        let trail = Trail::new(g, edges)?;
        for v in trail.vertices(g).iter().skip(1) {
            on_cycles[v.0] += 1;
        }
        used.extend(trail.edges().iter().copied());
        pack.steps.push(PackStep {
            heavy: heavy.len(),
            feeders: feeders.len(),
            feeders_outside,
            depleted_min_out,
            cycle_len: trail.len(),
        });
        pack.cycles.push(trail);
        pack.chosen.push(chosen);
    }
    Ok(pack)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> MultiDigraph {
        MultiDigraph::from_edges(n, (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))).unwrap()
    }

    #[test]
    fn doubled_triangle_normalizes() {
        let g = MultiDigraph::from_edges(3, [(0, 1), (0, 1), (1, 2), (1, 2), (2, 0), (2, 0)]).unwrap();
        let (lg, stats) = normalize_multiedges(&LiftedGraph::from_graph(g)).unwrap();
        assert!(is_normalized(lg.current()));
        assert!(lg.current().is_eulerian());
        assert!(stats.splits + stats.deletions > 0);
        assert!(lg.extract_certificate().verify().is_valid());
    }

    #[test]
    fn normalized_graph_is_unchanged() {
        let g = complete(4);
        let (lg, stats) = normalize_multiedges(&LiftedGraph::from_graph(g.clone())).unwrap();
        assert_eq!(stats, NormalizeStats::default());
        assert_eq!(lg.current(), &g);
    }

    #[test]
    fn antiparallel_multiple_pair_is_deleted() {
        let g = MultiDigraph::from_edges(2, [(0, 1), (0, 1), (1, 0), (1, 0)]).unwrap();
        let (lg, stats) = normalize_multiedges(&LiftedGraph::from_graph(g)).unwrap();
        assert_eq!(stats.deletions, 1);
        assert_eq!(lg.current().edge_count(), 2);
        assert!(is_normalized(lg.current()));
        assert!(lg.extract_certificate().verify().is_valid());
    }

    #[test]
    fn two_cycles_in_k5() {
        let g = complete(5);
        let pack = pack_cycles(&g, Some(2), 0.8, false).unwrap();
        assert_eq!(pack.len(), 2);
        pack.check(&g).unwrap();
        let all = pack_cycles(&g, None, 0.8, false).unwrap();
        assert_eq!(all.len(), 10);
        assert!(all.cycles.iter().all(|c| c.len() == 2));
    }

    #[test]
    fn directed_cycle_has_one() {
        let g = MultiDigraph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        let err = pack_cycles(&g, Some(2), 1.0 / 3.0, false).unwrap_err();
        match err {
            Error::HypothesisNotMet { stage, detail } => {
                assert_eq!(stage, "pack");
                assert!(detail.starts_with("found 1 of 2"), "{detail}");
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn empty_pack() {
        let pack = pack_cycles(&complete(3), Some(0), 0.5, false).unwrap();
        assert!(pack.is_empty());
    }

    #[test]
    fn unnormalized_input_is_rejected() {
        let g = MultiDigraph::from_edges(3, [(0, 1), (0, 1), (1, 2), (1, 2), (2, 0), (2, 0)]).unwrap();
        assert!(matches!(pack_cycles(&g, None, 0.5, false), Err(Error::Precondition(_))));
    }
}
