use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eulerian::biclique_pattern;
use crate::graph::{MultiDigraph, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Instance {
    /// Union of `d` random Hamiltonian cycles; parallel edges allowed.
    RandomEulerian { n: usize, d: usize, seed: u64 },
    /// Union of `d` random permutations without fixed points or shared edges.
    RandomSimpleEulerian { n: usize, d: usize, seed: u64 },
    CompleteDigraph { k: usize },
    Biclique { k: usize },
    Circulant { n: usize, offsets: Vec<usize> },
}

fn random_cycle(n: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    (0..n).map(|i| (order[i], order[(i + 1) % n])).collect()
}

fn random_eulerian(n: usize, d: usize, seed: u64) -> Result<MultiDigraph> {
    if n < 2 || d == 0 {
        return Err(Error::input(format!("random Eulerian digraph needs n >= 2 and d >= 1, got n = {n}, d = {d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = MultiDigraph::new(n);
    for _ in 0..d {
        for (a, b) in random_cycle(n, &mut rng) {
            g.add_edge(VertexId(a), VertexId(b))?;
        }
    }
    Ok(g)
}

/// Kuhn's augmenting-path step over a shuffled adjacency.
fn augment(u: usize, allowed: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
    for &v in &allowed[u] {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        if owner[v].is_none_or(|w| augment(w, allowed, seen, owner)) {
            owner[v] = Some(u);
            return true;
        }
    }
    false
}

/// `d` rounds of a random fixed-point-free permutation avoiding every edge
/// used so far. The unused edges form an `(n-1-r)`-regular bipartite graph
/// in round `r`, so a perfect matching always exists.
fn random_simple_eulerian(n: usize, d: usize, seed: u64) -> Result<MultiDigraph> {
    if n < 2 || d == 0 || d > n - 1 {
        return Err(Error::input(format!("a simple d-regular digraph on n vertices needs n >= 2 and 1 <= d < n, got n = {n}, d = {d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used = vec![BTreeSet::new(); n];
    let mut g = MultiDigraph::new(n);
    for _ in 0..d {
        let allowed: Vec<Vec<usize>> = (0..n)
            .map(|u| {
                let mut vs: Vec<usize> = (0..n).filter(|&v| v != u && !used[u].contains(&v)).collect();
                vs.shuffle(&mut rng);
                vs
            })
            .collect();
        let mut owner = vec![None; n];
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        for u in order {
            let mut seen = vec![false; n];
            if !augment(u, &allowed, &mut seen, &mut owner) {
                return Err(Error::internal("regular bipartite graph without a perfect matching"));
            }
        }
        for (v, u) in owner.into_iter().enumerate() {
            let u = u.expect("perfect matching");
            used[u].insert(v);
            g.add_edge(VertexId(u), VertexId(v))?;
        }
    }
    Ok(g)
}

pub fn circulant(n: usize, offsets: &[usize]) -> Result<MultiDigraph> {
    if n == 0 {
        return Err(Error::input("circulant needs n >= 1"));
    }
    let distinct: BTreeSet<usize> = offsets.iter().map(|o| o % n).collect();
    if distinct.contains(&0) || distinct.len() != offsets.len() {
        return Err(Error::input("offsets must be distinct and nonzero modulo n"));
    }
    MultiDigraph::from_edges(n, (0..n).flat_map(|i| distinct.iter().map(move |o| (i, (i + o) % n))))
}

pub fn generate(instance: &Instance) -> Result<MultiDigraph> {
    match *instance {
        Instance::RandomEulerian { n, d, seed } => random_eulerian(n, d, seed),
        Instance::RandomSimpleEulerian { n, d, seed } => random_simple_eulerian(n, d, seed),
        Instance::CompleteDigraph { k } => Ok(MultiDigraph::complete(k)),
        Instance::Biclique { k } => Ok(biclique_pattern(k)),
        Instance::Circulant { n, ref offsets } => circulant(n, offsets),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_eulerian_is_regular() {
        let g = generate(&Instance::RandomEulerian { n: 10, d: 3, seed: 1 }).unwrap();
        assert!(g.is_eulerian());
        assert!(g.vertices().all(|v| g.in_degree(v) == 3 && g.out_degree(v) == 3));
        let again = generate(&Instance::RandomEulerian { n: 10, d: 3, seed: 1 }).unwrap();
        assert_eq!(g.to_text(), again.to_text());
    }

    #[test]
    fn simple_variant_has_no_parallel_edges() {
        let g = generate(&Instance::RandomSimpleEulerian { n: 20, d: 8, seed: 7 }).unwrap();
        assert!(g.is_simple() && g.is_eulerian());
        assert_eq!(g.min_in_degree(), 8);
        let full = generate(&Instance::RandomSimpleEulerian { n: 9, d: 8, seed: 3 }).unwrap();
        assert_eq!(full.multiplicities(), MultiDigraph::complete(9).multiplicities());
    }

    #[test]
    fn fixed_families() {
        let k3 = generate(&Instance::CompleteDigraph { k: 3 }).unwrap();
        assert_eq!(k3.edge_count(), 6);
        assert!(k3.is_eulerian());
        let b = generate(&Instance::Biclique { k: 2 }).unwrap();
        assert_eq!(b.edge_count(), 4);
        assert!(!b.is_eulerian());
        let c = circulant(7, &[1, 2, 4]).unwrap();
        assert_eq!(c.edge_count(), 21);
        assert!(c.is_simple() && c.is_eulerian());
    }

    #[test]
    fn invalid_parameters() {
        assert!(generate(&Instance::RandomEulerian { n: 1, d: 2, seed: 0 }).is_err());
        assert!(generate(&Instance::RandomSimpleEulerian { n: 4, d: 4, seed: 0 }).is_err());
        assert!(circulant(5, &[5]).is_err());
        assert!(circulant(5, &[1, 6]).is_err());
    }
}
