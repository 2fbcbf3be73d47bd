use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiDigraph, VertexId};
use crate::immersion::Trail;
use crate::scalar::Real;
use crate::search::{bfs, shortest_cycle, Direction};

/// A simple digraph (antiparallel pairs allowed) with vertex weights.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedDigraph<T> {
    base: MultiDigraph,
    weights: Vec<T>,
}

impl<T: Real> WeightedDigraph<T> {
    pub fn new(base: MultiDigraph, weights: Vec<T>) -> Result<Self> {
        if !base.is_simple() {
            return Err(Error::input("weighted digraph must be simple"));
        }
        if weights.len() != base.vertex_count() {
            return Err(Error::input(format!(
                "{} weights for {} vertices",
                weights.len(),
                base.vertex_count()
            )));
        }
        if weights.iter().any(|w| w.is_nan() || *w < T::zero()) {
            return Err(Error::input("weights must be nonnegative"));
        }
        Ok(WeightedDigraph { base, weights })
    }

    pub fn uniform(base: MultiDigraph) -> Result<Self> {
        let n = base.vertex_count();
        WeightedDigraph::new(base, vec![T::one(); n])
    }

    pub fn base(&self) -> &MultiDigraph {
        &self.base
    }

    pub fn weight(&self, v: VertexId) -> T {
        self.weights[v.0]
    }

    pub fn weight_of<'a>(&self, set: impl IntoIterator<Item = &'a VertexId>) -> T {
        set.into_iter().fold(T::zero(), |acc, v| acc + self.weights[v.0])
    }

    pub fn total(&self) -> T {
        self.weights.iter().fold(T::zero(), |acc, &w| acc + w)
    }

    /// Largest α with `ω(N⁺(u)) >= α ω(V)` for all `u`.
    pub fn out_weight_ratio(&self) -> T {
        let total = self.total();
        if total <= T::zero() {
            return T::zero();
        }
        self.base
            .vertices()
            .map(|u| self.weight_of(&self.base.out_neighbours(u)) / total)
            .fold(T::infinity(), T::min)
    }
}

/// ⌈4/α⌉.
pub fn weighted_cycle_bound<T: Real>(alpha: T) -> usize {
    (T::lit(4.0) / alpha - T::tolerance()).ceil().to_usize().unwrap_or(usize::MAX)
}

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if !(alpha > T::zero() && alpha <= T::one()) {
        return Err(Error::precondition(format!("alpha = {alpha} is not in (0, 1]")));
    }
    Ok(())
}

/// A shortest directed cycle, which has length at most ⌈4/α⌉ whenever every
/// out-neighbourhood carries an α fraction of the total weight.
pub fn short_cycle_weighted<T: Real>(wd: &WeightedDigraph<T>, alpha: T) -> Result<Trail> {
    check_alpha(alpha)?;
    let total = wd.total();
    if total <= T::zero() {
        return Err(Error::precondition("total weight is zero"));
    }
    for u in wd.base.vertices() {
        let w = wd.weight_of(&wd.base.out_neighbours(u));
        if w + T::tolerance() * total < alpha * total {
            return Err(Error::precondition(format!(
                "out-neighbourhood of {u} has weight {w} below {alpha} of {total}"
            )));
        }
    }
    let cap = weighted_cycle_bound(alpha);
    let edges = shortest_cycle(&wd.base, |_| true, Some(cap))
        .ok_or_else(|| Error::internal(format!("no cycle of length at most {cap}")))?;
    Trail::new(&wd.base, edges)
}

/// Turns a closed walk into a vertex-simple cycle by cutting out the closed
/// sub-walk at the first repeated vertex until none remains.
pub fn closed_walk_to_cycle(g: &MultiDigraph, walk: &[EdgeId]) -> Result<Vec<EdgeId>> {
    let mut walk = walk.to_vec();
    let tails = |w: &[EdgeId]| -> Result<Vec<VertexId>> { w.iter().map(|&id| Ok(g.endpoints(id)?.tail)).collect() };
    if walk.is_empty() {
        return Err(Error::input("empty walk"));
    }
    let first = g.endpoints(walk[0])?.tail;
    let last = g.endpoints(*walk.last().expect("nonempty"))?.head;
    if first != last {
        return Err(Error::input("walk is not closed"));
    }
    loop {
        let vs = tails(&walk)?;
        let mut seen = std::collections::BTreeMap::new();
        let mut cut = None;
        for (j, v) in vs.iter().enumerate() {
            if let Some(&i) = seen.get(v) {
                cut = Some((i, j));
                break;
            }
            seen.insert(*v, j);
        }
        match cut {
            Some((i, j)) => {
                walk.drain(i..j);
            }
            None => return Ok(walk),
        }
    }
}

/// Evidence for the short-cycle argument on a small weighted digraph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct CoreDiagnostic<T> {
    /// A smallest vertex set `U` of positive weight in which every vertex
    /// sends an α fraction of `ω(U)` into `U`.
    pub core: Vec<VertexId>,
    /// Path-length horizon ⌈2/α⌉ + 1.
    pub horizon: usize,
    /// min over `u ∈ U` of `ω(N⁺_horizon(u)) / ω(U)`.
    pub min_out_reach: T,
    /// max over `u ∈ U` of `ω(N⁻_horizon(u)) / ω(U)`.
    pub max_in_reach: T,
    /// Length of a shortest cycle inside `U`.
    pub cycle_len: usize,
}

/// Exhaustive over subsets (up to 16 vertices).
pub fn dense_core_diagnostic<T: Real>(wd: &WeightedDigraph<T>, alpha: T) -> Result<CoreDiagnostic<T>> {
    check_alpha(alpha)?;
    let n = wd.base.vertex_count();
    if n > 16 {
        return Err(Error::input("diagnostic is exhaustive and limited to 16 vertices"));
    }
    let out: Vec<u32> = (0..n)
        .map(|u| wd.base.out_neighbours(VertexId(u)).iter().fold(0u32, |m, v| m | (1 << v.0)))
        .collect();
    let weight = |mask: u32| (0..n).filter(|i| mask >> i & 1 == 1).fold(T::zero(), |a, i| a + wd.weights[i]);
    let mut best: Option<u32> = None;
    for mask in 1u32..(1u32 << n) {
        if best.is_some_and(|b| b.count_ones() <= mask.count_ones()) {
            continue;
        }
        let total = weight(mask);
        if total <= T::zero() {
            continue;
        }
        let ok = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .all(|u| weight(out[u] & mask) + T::tolerance() * total >= alpha * total);
        if ok {
            best = Some(mask);
        }
    }
    let mask = best.ok_or_else(|| Error::precondition("no vertex set satisfies the degree condition"))?;
    let core: Vec<VertexId> = (0..n).filter(|i| mask >> i & 1 == 1).map(VertexId).collect();
    let inside: BTreeSet<VertexId> = core.iter().copied().collect();
    let sub = wd.base.induced(&core)?;
    let total = weight(mask);
    let horizon = (T::lit(2.0) / alpha - T::tolerance()).ceil().to_usize().unwrap_or(usize::MAX) + 1;
    let reach = |u: usize, dir: Direction| -> T {
        let t = bfs(&sub, [VertexId(u)], dir, |_| true, Some(horizon));
        t.dist.keys().fold(T::zero(), |a, v| a + wd.weights[core[v.0].0]) / total
    };
    let min_out_reach = (0..core.len()).map(|u| reach(u, Direction::Forward)).fold(T::infinity(), T::min);
    let max_in_reach = (0..core.len()).map(|u| reach(u, Direction::Backward)).fold(T::zero(), T::max);
    let cycle_len = shortest_cycle(&sub, |_| true, None)
        .map(|c| c.len())
        .ok_or_else(|| Error::internal("dense core has no cycle"))?;
    debug_assert!(core.iter().all(|v| inside.contains(v)));
    Ok(CoreDiagnostic {
        core,
        horizon,
        min_out_reach,
        max_in_reach,
        cycle_len,
    })
}
