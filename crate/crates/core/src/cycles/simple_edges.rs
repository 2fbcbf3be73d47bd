use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::weighted::{closed_walk_to_cycle, short_cycle_weighted, weighted_cycle_bound, WeightedDigraph};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiDigraph, VertexId};
use crate::immersion::Trail;
use crate::scalar::Real;
use crate::search::{bfs, shortest_cycle, Direction};

/// The digraph of pairs joined by at least two parallel edges, with each of
/// its edges remembering the first parallel copy in the original graph.
#[derive(Clone, Debug)]
pub(crate) struct DoubleEdges {
    pub graph: MultiDigraph,
    pub copy: BTreeMap<EdgeId, EdgeId>,
}

impl DoubleEdges {
    pub fn new(g: &MultiDigraph) -> Self {
        let mut graph = MultiDigraph::new(g.vertex_count());
        let mut copy = BTreeMap::new();
        for ((a, b), m) in g.multiplicities() {
            if m >= 2 {
                let id = graph.add_edge(a, b).expect("vertices in range");
                copy.insert(id, g.parallel_copies(a, b)[0]);
            }
        }
        DoubleEdges { graph, copy }
    }

    fn lift(&self, path: &[EdgeId]) -> Vec<EdgeId> {
        path.iter().map(|id| self.copy[id]).collect()
    }
}

/// Sinks of the double-edge digraph and the vertices draining into each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReachPartition {
    pub sinks: Vec<VertexId>,
    pub blocks: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl ReachPartition {
    /// Blocks in sink order over successively depleted graphs.
    pub fn build(double: &MultiDigraph) -> Result<Self> {
        let sinks: Vec<VertexId> = double.vertices().filter(|&v| double.out_degree(v) == 0).collect();
        let mut taken = BTreeSet::new();
        let mut blocks = BTreeMap::new();
        for &x in &sinks {
            let tree = bfs(
                double,
                [x],
                Direction::Backward,
                |id| {
                    let e = double.edge(id).expect("live edge");
                    !taken.contains(&e.tail) && !taken.contains(&e.head)
                },
                None,
            );
            let block: BTreeSet<VertexId> = tree.dist.into_keys().collect();
            taken.extend(block.iter().copied());
            blocks.insert(x, block);
        }
        if taken.len() != double.vertex_count() {
            return Err(Error::input("double-edge digraph has a cycle; blocks do not cover"));
        }
        Ok(ReachPartition { sinks, blocks })
    }

    pub fn block_of(&self, v: VertexId) -> Option<VertexId> {
        self.blocks.iter().find(|(_, b)| b.contains(&v)).map(|(&x, _)| x)
    }

    /// Blocks partition the vertices, each contains its sink, and every
    /// member reaches its sink inside the block.
    pub fn check(&self, double: &MultiDigraph) -> Result<()> {
        let mut seen = BTreeSet::new();
        for (&x, block) in &self.blocks {
            if !block.contains(&x) {
                return Err(Error::input(format!("block of {x} misses {x}")));
            }
            for &v in block {
                if !seen.insert(v) {
                    return Err(Error::input(format!("{v} lies in two blocks")));
                }
            }
            let tree = bfs(
                double,
                [x],
                Direction::Backward,
                |id| {
                    let e = double.edge(id).expect("live edge");
                    block.contains(&e.tail) && block.contains(&e.head)
                },
                None,
            );
            if let Some(v) = block.iter().find(|v| !tree.dist.contains_key(v)) {
                return Err(Error::input(format!("{v} does not reach {x} inside its block")));
            }
        }
        if seen.len() != double.vertex_count() {
            return Err(Error::input("blocks do not cover every vertex"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleRoute {
    /// A cycle of parallel-edge pairs.
    DoubleEdges,
    /// One simple edge from a sink back into its own block.
    OwnBlock,
    /// A short cycle in the weighted sink digraph.
    Weighted,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FewSimpleCycle {
    pub cycle: Trail,
    pub simple_edges: usize,
    pub route: CycleRoute,
    pub partition: Option<ReachPartition>,
}

pub(crate) fn count_simple(g: &MultiDigraph, edges: &[EdgeId]) -> Result<usize> {
    let mut count = 0;
    for &id in edges {
        let e = g.endpoints(id)?;
        if g.multiplicity(e.tail, e.head) == 1 {
            count += 1;
        }
    }
    Ok(count)
}

/// A vertex-simple directed cycle with at most ⌈4/α⌉ edges of multiplicity
/// one, in a loopless multi-digraph of minimum out-degree at least αn.
pub fn few_simple_edge_cycle<T: Real>(g: &MultiDigraph, alpha: T) -> Result<FewSimpleCycle> {
    if !(alpha > T::zero() && alpha <= T::one()) {
        return Err(Error::precondition(format!("alpha = {alpha} is not in (0, 1]")));
    }
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::precondition("graph is empty"));
    }
    if g.edges().any(|(_, e)| e.tail == e.head) {
        return Err(Error::precondition("graph has a loop"));
    }
    let need = alpha * T::count(n);
    if !T::count(g.min_out_degree()).at_least(need) {
        return Err(Error::precondition(format!(
            "minimum out-degree {} is below {alpha} * {n}",
            g.min_out_degree()
        )));
    }
    let double = DoubleEdges::new(g);
    let finish = |walk: Vec<EdgeId>, route, partition| -> Result<FewSimpleCycle> {
        let edges = closed_walk_to_cycle(g, &walk)?;
        let simple_edges = count_simple(g, &edges)?;
        let bound = weighted_cycle_bound(alpha);
        if simple_edges > bound {
            return Err(Error::internal(format!("cycle has {simple_edges} simple edges, bound {bound}")));
        }
        Ok(FewSimpleCycle {
            cycle: Trail::new(g, edges)?,
            simple_edges,
            route,
            partition,
        })
    };
    if let Some(c) = shortest_cycle(&double.graph, |_| true, None) {
        return finish(double.lift(&c), CycleRoute::DoubleEdges, None);
    }

    let partition = ReachPartition::build(&double.graph)?;
    let within = |x: VertexId, from: VertexId| -> Vec<EdgeId> {
        let block = &partition.blocks[&x];
        let tree = bfs(
            &double.graph,
            [from],
            Direction::Forward,
            |id| {
                let e = double.graph.edge(id).expect("live edge");
                block.contains(&e.tail) && block.contains(&e.head)
            },
            None,
        );
        double.lift(&tree.path_to(&double.graph, x, Direction::Forward))
    };

    for &x in &partition.sinks {
        let block = &partition.blocks[&x];
        if let Some(id) = g.out_edges(x).find(|&id| block.contains(&g.edge(id).expect("live edge").head)) {
            let head = g.edge(id).expect("live edge").head;
            let mut walk = vec![id];
            walk.extend(within(x, head));
            return finish(walk, CycleRoute::OwnBlock, Some(partition.clone()));
        }
    }

    // sink digraph: x_i -> x_j when some edge leaves x_i into U(x_j)
    let index: BTreeMap<VertexId, usize> = partition.sinks.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let owner: BTreeMap<VertexId, usize> = partition
        .blocks
        .iter()
        .flat_map(|(x, b)| b.iter().map(|&v| (v, index[x])))
        .collect();
    let m = partition.sinks.len();
    let mut aux = MultiDigraph::new(m);
    let mut witness: BTreeMap<EdgeId, EdgeId> = BTreeMap::new();
    let mut best: BTreeMap<(usize, usize), EdgeId> = BTreeMap::new();
    for (i, &x) in partition.sinks.iter().enumerate() {
        for id in g.out_edges(x) {
            let j = owner[&g.edge(id).expect("live edge").head];
            best.entry((i, j)).and_modify(|e| *e = (*e).min(id)).or_insert(id);
        }
    }
    for ((i, j), id) in best {
        let a = aux.add_edge(VertexId(i), VertexId(j))?;
        witness.insert(a, id);
    }
    let weights = partition.sinks.iter().map(|x| T::count(partition.blocks[x].len())).collect();
    let wd = WeightedDigraph::new(aux, weights)?;
    let c = short_cycle_weighted(&wd, alpha).map_err(|e| match e {
        Error::Precondition(d) => Error::internal(format!("sink digraph violates the weight bound: {d}")),
        e => e,
    })?;
    let mut walk = Vec::new();
    for &a in c.edges() {
        let id = witness[&a];
        let e = g.edge(id).expect("live edge");
        let target = partition.sinks[owner[&e.head]];
        walk.push(id);
        walk.extend(within(target, e.head));
    }
    finish(walk, CycleRoute::Weighted, Some(partition.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn doubled_triangle_uses_no_simple_edge() {
        let g = MultiDigraph::from_edges(3, [(0, 1), (0, 1), (1, 2), (1, 2), (2, 0), (2, 0)]).unwrap();
        let c = few_simple_edge_cycle(&g, 0.5).unwrap();
        assert_eq!(c.route, CycleRoute::DoubleEdges);
        assert_eq!(c.simple_edges, 0);
        assert_eq!(c.cycle.len(), 3);
    }

    #[test]
    fn one_simple_edge_back_into_block() {
        // a => b and b -> a
        let g = MultiDigraph::from_edges(2, [(0, 1), (0, 1), (1, 0)]).unwrap();
        let c = few_simple_edge_cycle(&g, 0.5).unwrap();
        assert_eq!(c.route, CycleRoute::OwnBlock);
        assert_eq!(c.simple_edges, 1);
        assert_eq!(c.cycle.len(), 2);
        let p = c.partition.unwrap();
        assert_eq!(p.sinks, vec![VertexId(1)]);
        let d = DoubleEdges::new(&g);
        p.check(&d.graph).unwrap();
    }

    #[test]
    fn complete_digraph_gives_two_cycle() {
        let g = MultiDigraph::from_edges(5, (0..5).flat_map(|a| (0..5).filter(move |&b| b != a).map(move |b| (a, b))))
            .unwrap();
        let c = few_simple_edge_cycle(&g, 0.8).unwrap();
        assert_eq!(c.route, CycleRoute::Weighted);
        assert_eq!(c.cycle.len(), 2);
        assert!(c.simple_edges <= 5);
    }

    #[test]
    fn weighted_route_through_blocks() {
        // blocks {0,1} and {2,3} drain to 1 and 3; simple edges 1 -> 2 and
        // 3 -> 0 join them
        let g = MultiDigraph::from_edges(4, [(0, 1), (0, 1), (2, 3), (2, 3), (1, 2), (3, 0)]).unwrap();
        let c = few_simple_edge_cycle(&g, 0.25).unwrap();
        assert_eq!(c.route, CycleRoute::Weighted);
        assert_eq!(c.simple_edges, 2);
        assert_eq!(c.cycle.len(), 4);
        assert!(c.cycle.is_closed());
    }

    #[test]
    fn preconditions() {
        let g = MultiDigraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert!(matches!(few_simple_edge_cycle(&g, 0.3), Err(Error::Precondition(_))));
    }
}
