//! Multi-digraphs with stable edge identities, plus undirected simple views.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::fmt::Write as _;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Identity of one edge copy. Never reused within a lineage of derived graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub tail: VertexId,
    pub head: VertexId,
}

impl Edge {
    pub fn new(tail: usize, head: usize) -> Self {
        Edge {
            tail: VertexId(tail),
            head: VertexId(head),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeProfile {
    /// Out-degree counting parallel copies.
    pub d_out: usize,
    pub d_in: usize,
    /// Number of distinct out-neighbours.
    pub simple_out: usize,
    pub simple_in: usize,
}

/// Directed multigraph on vertices `0..n` whose edges carry unique [`EdgeId`]s.
#[derive(Clone, Debug)]
pub struct MultiDigraph {
    n: usize,
    edges: BTreeMap<EdgeId, Edge>,
    out_adj: Vec<BTreeSet<EdgeId>>,
    in_adj: Vec<BTreeSet<EdgeId>>,
    loops_allowed: bool,
    next_id: usize,
}

impl PartialEq for MultiDigraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.loops_allowed == other.loops_allowed && self.edges == other.edges
    }
}

impl Eq for MultiDigraph {}

impl MultiDigraph {
    pub fn new(n: usize) -> Self {
        MultiDigraph {
            n,
            edges: BTreeMap::new(),
            out_adj: vec![BTreeSet::new(); n],
            in_adj: vec![BTreeSet::new(); n],
            loops_allowed: false,
            next_id: 0,
        }
    }

    pub fn with_loops(n: usize) -> Self {
        MultiDigraph {
            loops_allowed: true,
            ..Self::new(n)
        }
    }

    /// Builds a graph whose edge ids are `0..m` in iteration order.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::new(n);
        for (t, h) in edges {
            g.add_edge(VertexId(t), VertexId(h))?;
        }
        Ok(g)
    }

    /// The complete digraph, edges `(i, j)` numbered in `i`-major order.
    pub fn complete(n: usize) -> Self {
        Self::from_edges(n, (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))))
            .expect("edges in range")
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn loops_allowed(&self) -> bool {
        self.loops_allowed
    }

    pub fn set_loops_allowed(&mut self, allowed: bool) {
        self.loops_allowed = allowed;
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.n).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, Edge)> + '_ {
        self.edges.iter().map(|(&id, &e)| (id, e))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn edge(&self, id: EdgeId) -> Option<Edge> {
        self.edges.get(&id).copied()
    }

    pub fn contains_edge(&self, id: EdgeId) -> bool {
        self.edges.contains_key(&id)
    }

    pub(crate) fn endpoints(&self, id: EdgeId) -> Result<Edge> {
        self.edge(id)
            .ok_or_else(|| Error::input(format!("unknown edge {id}")))
    }

    /// The id the next call to [`MultiDigraph::add_edge`] will assign.
    pub fn next_edge_id(&self) -> EdgeId {
        EdgeId(self.next_id)
    }

    /// Guarantees freshly assigned ids are at least `floor`.
    pub fn reserve_ids_below(&mut self, floor: EdgeId) {
        self.next_id = self.next_id.max(floor.0);
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v.0 < self.n {
            Ok(())
        } else {
            Err(Error::input(format!(
                "vertex {v} out of range for graph on {} vertices",
                self.n
            )))
        }
    }

    pub fn add_edge(&mut self, tail: VertexId, head: VertexId) -> Result<EdgeId> {
        let id = EdgeId(self.next_id);
        self.insert_edge(id, tail, head)?;
        Ok(id)
    }

    /// Inserts an edge under a caller-chosen id.
    pub fn insert_edge(&mut self, id: EdgeId, tail: VertexId, head: VertexId) -> Result<()> {
        self.check_vertex(tail)?;
        self.check_vertex(head)?;
        if tail == head && !self.loops_allowed {
            return Err(Error::input(format!("loop at {tail} not allowed")));
        }
        if self.edges.contains_key(&id) {
            return Err(Error::input(format!("edge id {id} already in use")));
        }
        self.edges.insert(id, Edge { tail, head });
        self.out_adj[tail.0].insert(id);
        self.in_adj[head.0].insert(id);
        self.next_id = self.next_id.max(id.0 + 1);
        Ok(())
    }

    pub fn remove_edge(&mut self, id: EdgeId) -> Result<Edge> {
        let e = self
            .edges
            .remove(&id)
            .ok_or_else(|| Error::input(format!("unknown edge {id}")))?;
        self.out_adj[e.tail.0].remove(&id);
        self.in_adj[e.head.0].remove(&id);
        Ok(e)
    }

    pub fn out_edges(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.out_adj[v.0].iter().copied()
    }

    pub fn in_edges(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.in_adj[v.0].iter().copied()
    }

    #[inline]
    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_adj[v.0].len()
    }

    #[inline]
    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_adj[v.0].len()
    }

    pub fn out_neighbours(&self, v: VertexId) -> BTreeSet<VertexId> {
        self.out_adj[v.0].iter().map(|id| self.edges[id].head).collect()
    }

    pub fn in_neighbours(&self, v: VertexId) -> BTreeSet<VertexId> {
        self.in_adj[v.0].iter().map(|id| self.edges[id].tail).collect()
    }

    /// Number of parallel copies of `tail -> head`.
    pub fn multiplicity(&self, tail: VertexId, head: VertexId) -> usize {
        self.out_adj[tail.0]
            .iter()
            .filter(|id| self.edges[*id].head == head)
            .count()
    }

    /// All copies of `tail -> head`, smallest id first.
    pub fn parallel_copies(&self, tail: VertexId, head: VertexId) -> Vec<EdgeId> {
        self.out_adj[tail.0]
            .iter()
            .copied()
            .filter(|id| self.edges[id].head == head)
            .collect()
    }

    /// Multiplicity of every ordered pair that carries at least one edge.
    pub fn multiplicities(&self) -> BTreeMap<(VertexId, VertexId), usize> {
        let mut m = BTreeMap::new();
        for e in self.edges.values() {
            *m.entry((e.tail, e.head)).or_insert(0) += 1;
        }
        m
    }

    pub fn degree_profile(&self, v: VertexId) -> Result<DegreeProfile> {
        self.check_vertex(v)?;
        Ok(DegreeProfile {
            d_out: self.out_degree(v),
            d_in: self.in_degree(v),
            simple_out: self.out_neighbours(v).len(),
            simple_in: self.in_neighbours(v).len(),
        })
    }

    /// Every vertex has equal in- and out-degree. Connectivity is not required.
    pub fn is_eulerian(&self) -> bool {
        self.vertices()
            .all(|v| self.in_degree(v) == self.out_degree(v))
    }

    /// Sum over vertices of `|d+(v) - d-(v)|`.
    pub fn imbalance(&self) -> usize {
        self.vertices()
            .map(|v| self.out_degree(v).abs_diff(self.in_degree(v)))
            .sum()
    }

    /// No parallel copies and no loops. Antiparallel pairs are allowed.
    pub fn is_simple(&self) -> bool {
        self.vertices().all(|v| {
            let mut seen = BTreeSet::new();
            self.out_edges(v).all(|id| {
                let h = self.edges[&id].head;
                h != v && seen.insert(h)
            })
        })
    }

    pub fn has_antiparallel_pair(&self) -> bool {
        self.edges
            .values()
            .any(|e| e.tail != e.head && self.multiplicity(e.head, e.tail) > 0)
    }

    pub fn min_in_degree(&self) -> usize {
        self.vertices().map(|v| self.in_degree(v)).min().unwrap_or(0)
    }

    pub fn min_out_degree(&self) -> usize {
        self.vertices().map(|v| self.out_degree(v)).min().unwrap_or(0)
    }

    pub fn max_in_degree(&self) -> usize {
        self.vertices().map(|v| self.in_degree(v)).max().unwrap_or(0)
    }

    pub fn max_out_degree(&self) -> usize {
        self.vertices().map(|v| self.out_degree(v)).max().unwrap_or(0)
    }

    /// Directed average degree `e(D)/|D|`, counting multiplicities.
    ///
    /// Note the normalisation: this is half the usual undirected `2e/n`.
    pub fn average_degree(&self) -> Result<Ratio<usize>> {
        if self.n == 0 {
            return Err(Error::input("average degree of the empty graph"));
        }
        Ok(Ratio::new(self.edges.len(), self.n))
    }

    /// Drops directions and multiplicities; antiparallel pairs collapse to one edge.
    pub fn underlying_simple(&self) -> SimpleGraph {
        let mut g = SimpleGraph::with_vertices(self.vertices());
        for e in self.edges.values() {
            if e.tail != e.head {
                g.add_edge(e.tail, e.head).expect("endpoints are vertices");
            }
        }
        g
    }

    /// For each unordered pair of the underlying simple graph, the
    /// lexicographically least directed edge `(tail, head, id)` realising it.
    pub fn canonical_orientation(&self) -> BTreeMap<(VertexId, VertexId), EdgeId> {
        let mut best: BTreeMap<(VertexId, VertexId), (VertexId, VertexId, EdgeId)> =
            BTreeMap::new();
        for (&id, e) in &self.edges {
            if e.tail == e.head {
                continue;
            }
            let key = if e.tail < e.head {
                (e.tail, e.head)
            } else {
                (e.head, e.tail)
            };
            let cand = (e.tail, e.head, id);
            best.entry(key)
                .and_modify(|b| {
                    if cand < *b {
                        *b = cand
                    }
                })
                .or_insert(cand);
        }
        best.into_iter().map(|(k, (_, _, id))| (k, id)).collect()
    }

    /// Sub-multigraph induced on `keep`, relabelled to `0..keep.len()` in the
    /// given order. Edge ids are preserved.
    pub fn induced(&self, keep: &[VertexId]) -> Result<MultiDigraph> {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            self.check_vertex(v)?;
            if index[v.0] != usize::MAX {
                return Err(Error::input(format!("vertex {v} listed twice")));
            }
            index[v.0] = i;
        }
        let mut g = MultiDigraph::new(keep.len());
        g.loops_allowed = self.loops_allowed;
        for (&id, e) in &self.edges {
            let (t, h) = (index[e.tail.0], index[e.head.0]);
            if t != usize::MAX && h != usize::MAX {
                g.insert_edge(id, VertexId(t), VertexId(h))?;
            }
        }
        g.next_id = g.next_id.max(self.next_id);
        Ok(g)
    }

    /// Applies `perm[v] = new label of v`. Edge ids are preserved.
    pub fn relabel(&self, perm: &[usize]) -> Result<MultiDigraph> {
        if perm.len() != self.n {
            return Err(Error::input("permutation length does not match vertex count"));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::input("relabelling is not a permutation"));
            }
        }
        let mut g = MultiDigraph::new(self.n);
        g.loops_allowed = self.loops_allowed;
        for (&id, e) in &self.edges {
            g.insert_edge(id, VertexId(perm[e.tail.0]), VertexId(perm[e.head.0]))?;
        }
        g.next_id = self.next_id;
        Ok(g)
    }

    /// Serialises as `n m` followed by one `tail head` line per edge, in id order.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(12 * (self.edges.len() + 1));
        let _ = writeln!(s, "{} {}", self.n, self.edges.len());
        for e in self.edges.values() {
            let _ = writeln!(s, "{} {}", e.tail.0, e.head.0);
        }
        s
    }

    /// Parses the text format. Edge ids are assigned `0..m` in file order.
    pub fn from_text(text: &str) -> Result<MultiDigraph> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::input("empty graph file"))?;
        let [n, m] = parse_pair(header)?;
        let mut g = MultiDigraph::new(n);
        for (i, line) in lines.enumerate() {
            if i >= m {
                return Err(Error::input(format!("more than the declared {m} edges")));
            }
            let [t, h] = parse_pair(line)?;
            g.add_edge(VertexId(t), VertexId(h))?;
        }
        if g.edge_count() != m {
            return Err(Error::input(format!(
                "declared {m} edges but found {}",
                g.edge_count()
            )));
        }
        Ok(g)
    }
}

fn parse_pair(line: &str) -> Result<[usize; 2]> {
    let mut it = line.split_whitespace().map(str::parse::<usize>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok([a, b]),
        _ => Err(Error::input(format!("expected two integers, got {line:?}"))),
    }
}

/// Undirected simple graph on an explicit vertex set.
///
/// Vertices keep the labels of whatever graph they came from, so subgraphs
/// can be mapped back without a separate relabelling table.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
    edge_count: usize,
}

impl SimpleGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(vs: impl IntoIterator<Item = VertexId>) -> Self {
        SimpleGraph {
            adj: vs.into_iter().map(|v| (v, BTreeSet::new())).collect(),
            edge_count: 0,
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Self::with_vertices((0..n).map(VertexId));
        for (u, v) in edges {
            g.add_edge(VertexId(u), VertexId(v))?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::with_vertices((0..n).map(VertexId));
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(VertexId(u), VertexId(v)).unwrap();
            }
        }
        g
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.adj.entry(v).or_default();
    }

    /// Adds `{u, v}`; returns false if it was already present.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool> {
        if u == v {
            return Err(Error::input(format!("loop at {u} in simple graph")));
        }
        if !self.adj.contains_key(&u) || !self.adj.contains_key(&v) {
            return Err(Error::input(format!("edge {{{u}, {v}}} has unknown endpoint")));
        }
        let fresh = self.adj.get_mut(&u).unwrap().insert(v);
        if fresh {
            self.adj.get_mut(&v).unwrap().insert(u);
            self.edge_count += 1;
        }
        Ok(fresh)
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> bool {
        let removed = self.adj.get_mut(&u).is_some_and(|s| s.remove(&v));
        if removed {
            self.adj.get_mut(&v).unwrap().remove(&u);
            self.edge_count -= 1;
        }
        removed
    }

    pub fn remove_vertex(&mut self, v: VertexId) {
        if let Some(nbrs) = self.adj.remove(&v) {
            for u in &nbrs {
                self.adj.get_mut(u).unwrap().remove(&v);
            }
            self.edge_count -= nbrs.len();
        }
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj.get(&u).is_some_and(|s| s.contains(&v))
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    pub fn neighbours(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.get(&v).into_iter().flat_map(|s| s.iter().copied())
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj.get(&v).map_or(0, BTreeSet::len)
    }

    /// Each edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj
            .iter()
            .flat_map(|(&u, s)| s.range(u..).map(move |&v| (u, v)))
    }

    pub fn min_degree(&self) -> usize {
        self.adj.values().map(BTreeSet::len).min().unwrap_or(0)
    }

    /// Undirected average degree `2e/n`.
    pub fn average_degree(&self) -> Result<Ratio<usize>> {
        if self.adj.is_empty() {
            return Err(Error::input("average degree of the empty graph"));
        }
        Ok(Ratio::new(2 * self.edge_count, self.adj.len()))
    }

    /// `2e/n` as a float; zero for the empty graph.
    pub fn average_degree_f64(&self) -> f64 {
        if self.adj.is_empty() {
            0.0
        } else {
            2.0 * self.edge_count as f64 / self.adj.len() as f64
        }
    }

    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> SimpleGraph {
        let adj: BTreeMap<_, BTreeSet<_>> = self
            .adj
            .iter()
            .filter(|(v, _)| keep.contains(v))
            .map(|(&v, s)| (v, s.intersection(keep).copied().collect()))
            .collect();
        let twice: usize = adj.values().map(BTreeSet::len).sum();
        SimpleGraph {
            adj,
            edge_count: twice / 2,
        }
    }

    /// Connected components, each sorted, listed by smallest member.
    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for v in self.vertices() {
            if seen.contains(&v) {
                continue;
            }
            let mut comp = BTreeSet::from([v]);
            let mut queue = VecDeque::from([v]);
            seen.insert(v);
            while let Some(u) = queue.pop_front() {
                for w in self.neighbours(u) {
                    if seen.insert(w) {
                        comp.insert(w);
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Breadth-first distances from `source`, truncated at `radius`.
    pub fn ball(&self, source: VertexId, radius: usize) -> BTreeMap<VertexId, usize> {
        let mut dist = BTreeMap::from([(source, 0)]);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[&u];
            if d == radius {
                continue;
            }
            for w in self.neighbours(u) {
                if let std::collections::btree_map::Entry::Vacant(slot) = dist.entry(w) {
                    slot.insert(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}
