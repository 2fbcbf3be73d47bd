//! Generators and brute-force oracles shared by the integration tests.
//! Nothing here calls the search routines of the library under test.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use digraph_immersion::pipeline::{generate, Instance};
use digraph_immersion::{EdgeId, LiftedGraph, MultiDigraph, VertexId};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_eulerian(n: usize, d: usize, seed: u64) -> MultiDigraph {
    generate(&Instance::RandomEulerian { n, d, seed }).unwrap()
}

pub fn random_simple_eulerian(n: usize, d: usize, seed: u64) -> MultiDigraph {
    generate(&Instance::RandomSimpleEulerian { n, d, seed }).unwrap()
}

/// Union of `cycles` random directed cycles of random lengths, so degrees vary.
pub fn ragged_eulerian(n: usize, cycles: usize, rng: &mut ChaCha8Rng) -> MultiDigraph {
    let mut g = MultiDigraph::new(n);
    for _ in 0..cycles {
        let len = rng.gen_range(2..=n);
        let mut vs: Vec<usize> = (0..n).collect();
        vs.shuffle(rng);
        for i in 0..len {
            g.add_edge(VertexId(vs[i]), VertexId(vs[(i + 1) % len])).unwrap();
        }
    }
    g
}

/// A random simple digraph with each possible edge present with probability `p`.
pub fn random_simple_digraph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> MultiDigraph {
    let mut g = MultiDigraph::new(n);
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.gen_bool(p) {
                g.add_edge(VertexId(a), VertexId(b)).unwrap();
            }
        }
    }
    g
}

/// Loopless multi-digraph where every vertex gets `out` edges to random heads.
pub fn random_out_regular_multigraph(n: usize, out: usize, rng: &mut ChaCha8Rng) -> MultiDigraph {
    let mut g = MultiDigraph::new(n);
    for a in 0..n {
        for _ in 0..out {
            let mut b = rng.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            g.add_edge(VertexId(a), VertexId(b)).unwrap();
        }
    }
    g
}

/// Breadth-first distances along out-edges.
pub fn distances(g: &MultiDigraph, from: VertexId) -> BTreeMap<VertexId, usize> {
    let mut dist = BTreeMap::from([(from, 0)]);
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for w in g.out_neighbours(u) {
            if !dist.contains_key(&w) {
                dist.insert(w, dist[&u] + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Length of a shortest directed cycle: for each edge `u -> v`, one plus the
/// distance from `v` back to `u`.
pub fn girth(g: &MultiDigraph) -> Option<usize> {
    let mut best = None;
    for v in g.vertices() {
        let dist = distances(g, v);
        for u in g.in_neighbours(v) {
            if let Some(d) = dist.get(&u) {
                best = Some(best.map_or(d + 1, |b: usize| b.min(d + 1)));
            }
        }
    }
    best
}

pub fn is_closed_trail(g: &MultiDigraph, edges: &[EdgeId]) -> bool {
    if edges.is_empty() || edges.iter().collect::<BTreeSet<_>>().len() != edges.len() {
        return false;
    }
    let es: Vec<_> = edges.iter().map(|&id| g.edge(id)).collect();
    if es.iter().any(Option::is_none) {
        return false;
    }
    let es: Vec<_> = es.into_iter().map(Option::unwrap).collect();
    (0..es.len()).all(|i| es[i].head == es[(i + 1) % es.len()].tail)
}

/// A directed cycle of current edges found by walking along unused out-edges
/// from `start` until a vertex repeats. Needs every visited vertex to have an
/// out-edge, which holds in an Eulerian graph.
pub fn walk_to_cycle(g: &MultiDigraph, start: VertexId, rng: &mut ChaCha8Rng) -> Option<Vec<EdgeId>> {
    let mut at = start;
    let mut order: Vec<VertexId> = Vec::new();
    let mut taken: Vec<EdgeId> = Vec::new();
    let mut pos = BTreeMap::new();
    loop {
        if let Some(&i) = pos.get(&at) {
            return Some(taken[i..].to_vec());
        }
        pos.insert(at, order.len());
        order.push(at);
        let outs: Vec<EdgeId> = g.out_edges(at).collect();
        let &e = outs.choose(rng)?;
        taken.push(e);
        at = g.edge(e).unwrap().head;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Split,
    DeleteCycle,
}

/// Applies `steps` random legal splits and cycle deletions, calling `after`
/// once per applied operation.
pub fn fuzz_lifted(
    lg: &mut LiftedGraph,
    steps: usize,
    rng: &mut ChaCha8Rng,
    mut after: impl FnMut(&LiftedGraph, Op),
) {
    for _ in 0..steps {
        let g = lg.current();
        if g.edge_count() == 0 {
            return;
        }
        let ids: Vec<EdgeId> = g.edge_ids().collect();
        if rng.gen_bool(0.8) {
            let e1 = *ids.choose(rng).unwrap();
            let mid = g.edge(e1).unwrap();
            let outs: Vec<EdgeId> = g
                .out_edges(mid.head)
                .filter(|&e| e != e1 && g.edge(e).unwrap().head != mid.tail)
                .collect();
            if let Some(&e2) = outs.choose(rng) {
                lg.split(e1, e2).unwrap();
                after(lg, Op::Split);
            }
        } else {
            let start = g.edge(*ids.choose(rng).unwrap()).unwrap().tail;
            if let Some(cycle) = walk_to_cycle(g, start, rng) {
                lg.delete_edges(&cycle).unwrap();
                after(lg, Op::DeleteCycle);
            }
        }
    }
}

pub fn host(g: MultiDigraph) -> Arc<MultiDigraph> {
    Arc::new(g)
}
