use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::params::{log2, DenseParams};
use super::{check_host, Immersed};
use crate::error::{Error, Result};
use crate::expanders::{connect_avoiding, ConnectOptions, Connection};
use crate::graph::{EdgeId, MultiDigraph, VertexId};
use crate::immersion::ImmersionCertificate;
use crate::scalar::Real;

/// Blocks of sources and sinks, each with a private neighbourhood.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallCaseLayout {
    pub a: usize,
    pub b: usize,
    pub u_plus: Vec<Vec<VertexId>>,
    pub u_minus: Vec<Vec<VertexId>>,
    /// Out-neighbours of a source, in-neighbours of a sink.
    pub w: BTreeMap<VertexId, Vec<VertexId>>,
    /// Part of `w` avoiding every source and sink.
    pub w_prime: BTreeMap<VertexId, Vec<VertexId>>,
    /// Each matching is a list of (source, sink) pairs.
    pub matchings: Vec<Vec<(VertexId, VertexId)>>,
}

impl SmallCaseLayout {
    pub fn sources(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.u_plus.iter().flatten().copied()
    }

    pub fn sinks(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.u_minus.iter().flatten().copied()
    }

    /// Structural checks: disjoint blocks, disjoint private sets within a
    /// block, private sets inside the right neighbourhoods, and matchings that
    /// partition sources × sinks with each block pair empty or perfect.
    pub fn check(&self, g: &MultiDigraph) -> Result<()> {
        let fail = |m: String| Err(Error::internal(format!("small-case layout: {m}")));
        let all: Vec<VertexId> = self.sources().chain(self.sinks()).collect();
        if all.iter().collect::<BTreeSet<_>>().len() != all.len() || all.len() != 2 * self.a * self.b {
            return fail("blocks are not disjoint blocks of size a".into());
        }
        for (blocks, out) in [(&self.u_plus, true), (&self.u_minus, false)] {
            for block in blocks {
                let mut seen = BTreeSet::new();
                for u in block {
                    let nb = if out { g.out_neighbours(*u) } else { g.in_neighbours(*u) };
                    for w in &self.w[u] {
                        if !nb.contains(w) {
                            return fail(format!("{w} is not a neighbour of {u}"));
                        }
                        if !seen.insert(*w) {
                            return fail(format!("{w} shared inside a block"));
                        }
                    }
                }
            }
        }
        let mut covered = BTreeSet::new();
        for m in &self.matchings {
            let mut block_pairs: BTreeMap<(usize, usize), usize> = BTreeMap::new();
            for &(x, y) in m {
                if !covered.insert((x, y)) {
                    return fail(format!("pair ({x}, {y}) in two matchings"));
                }
                *block_pairs.entry((self.block_of(x, true), self.block_of(y, false))).or_default() += 1;
            }
            let xs: BTreeSet<_> = m.iter().map(|p| p.0).collect();
            let ys: BTreeSet<_> = m.iter().map(|p| p.1).collect();
            if xs.len() != m.len() || ys.len() != m.len() || block_pairs.values().any(|&c| c != self.a) {
                return fail("matching is not block-perfect".into());
            }
        }
        if covered.len() != (self.a * self.b).pow(2) {
            return fail("matchings do not cover all pairs".into());
        }
        Ok(())
    }

    fn block_of(&self, v: VertexId, source: bool) -> usize {
        let blocks = if source { &self.u_plus } else { &self.u_minus };
        blocks.iter().position(|b| b.contains(&v)).expect("vertex in a block")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingRecord {
    pub pairs: usize,
    pub connected: usize,
    pub longest: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallCaseReport {
    pub layout: SmallCaseLayout,
    pub path_cap: Option<usize>,
    pub initial_forbidden: usize,
    pub matchings: Vec<MatchingRecord>,
    pub connected: usize,
}

/// `k >= (log₂(n/k))^7`.
pub fn small_case_applies(n: usize, k: usize) -> bool {
    let l = n as f64 / k.max(1) as f64;
    k as f64 >= log2(l).max(0.0).powi(7)
}

/// Block sizes `a = min(k, ℓ / (log ℓ)^8)` (at least 1) and `b = ⌈k/a⌉`.
pub fn block_sizes(n: usize, k: usize) -> (usize, usize) {
    let l = n as f64 / k as f64;
    let ll = log2(l);
    let cap = if ll > 0.0 { (l / ll.powi(8)).floor() } else { f64::INFINITY };
    let a = (cap.min(k as f64) as usize).max(1);
    (a, k.div_ceil(a))
}

/// Latin-square schedule: matching `(s, q)` pairs the `p`-th source of block
/// `j` with the `(p + q)`-th sink of block `j + s`.
fn latin_matchings(u_plus: &[Vec<VertexId>], u_minus: &[Vec<VertexId>], a: usize) -> Vec<Vec<(VertexId, VertexId)>> {
    let b = u_plus.len();
    let mut out = Vec::with_capacity(a * b);
    for s in 0..b {
        for q in 0..a {
            let m = (0..b)
                .flat_map(|j| (0..a).map(move |p| (j, p)))
                .map(|(j, p)| (u_plus[j][p], u_minus[(j + s) % b][(p + q) % a]))
                .collect();
            out.push(m);
        }
    }
    out
}

/// Oriented adjacency of the underlying graph (least directed edge per pair).
fn oriented_adjacency(g: &MultiDigraph) -> (Vec<Vec<VertexId>>, Vec<Vec<VertexId>>) {
    let n = g.vertex_count();
    let (mut out, mut inn) = (vec![Vec::new(); n], vec![Vec::new(); n]);
    for id in g.canonical_orientation().into_values() {
        let e = g.edge(id).expect("orientation edge");
        out[e.tail.0].push(e.head);
        inn[e.head.0].push(e.tail);
    }
    for l in out.iter_mut().chain(inn.iter_mut()) {
        l.sort();
    }
    (out, inn)
}

pub fn build_layout<T: Real>(g: &MultiDigraph, k: usize, p: &DenseParams<T>) -> Result<SmallCaseLayout> {
    let n = g.vertex_count();
    let (a, b) = block_sizes(n, k);
    let select = p.small_select_factor * k;
    let w_size = p.small_w_factor * k;
    let (out_adj, in_adj) = oriented_adjacency(g);
    let mut u_plus = Vec::with_capacity(b);
    let mut u_minus = Vec::with_capacity(b);
    let mut w: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    let mut earlier: BTreeSet<VertexId> = BTreeSet::new();
    for block in 0..b {
        // removed: earlier blocks, this block's chosen vertices and their private sets
        let mut removed = earlier.clone();
        let mut sides = [Vec::with_capacity(a), Vec::with_capacity(a)];
        for (side, adj) in [(0, &out_adj), (1, &in_adj)] {
            for slot in 0..a {
                let alive = |v: &VertexId| !removed.contains(v);
                let found = g.vertices().filter(alive).find_map(|u| {
                    let nb: Vec<VertexId> = adj[u.0].iter().copied().filter(alive).collect();
                    (nb.len() >= select).then(|| (u, nb[..w_size.min(nb.len())].to_vec()))
                });
                let Some((u, ws)) = found else {
                    return Err(Error::hypothesis(
                        "small layout",
                        format!(
                            "block {block}, {} slot {slot}: no vertex with oriented {} {select} among {} remaining",
                            if side == 0 { "source" } else { "sink" },
                            if side == 0 { "out-degree" } else { "in-degree" },
                            n - removed.len()
                        ),
                    ));
                };
                if ws.len() < w_size {
                    return Err(Error::hypothesis("small layout", "private set too small"));
                }
                removed.insert(u);
                removed.extend(&ws);
                sides[side].push(u);
                w.insert(u, ws);
            }
        }
        let [plus, minus] = sides;
        earlier.extend(&plus);
        earlier.extend(&minus);
        u_plus.push(plus);
        u_minus.push(minus);
    }
    let w_prime_size = p.small_w_prime_factor * k;
    let mut w_prime = BTreeMap::new();
    for (&u, ws) in &w {
        let rest: Vec<VertexId> = ws.iter().copied().filter(|v| !earlier.contains(v)).take(w_prime_size).collect();
        if rest.len() < w_prime_size {
            return Err(Error::hypothesis(
                "small layout",
                format!("private set of {u} has {} vertices outside the blocks, need {w_prime_size}", rest.len()),
            ));
        }
        w_prime.insert(u, rest);
    }
    let matchings = latin_matchings(&u_plus, &u_minus, a);
    let layout = SmallCaseLayout {
        a,
        b,
        u_plus,
        u_minus,
        w,
        w_prime,
        matchings,
    };
    layout.check(g)?;
    Ok(layout)
}

/// Edges at a block vertex other than those joining it to its private set.
fn initial_forbidden(g: &MultiDigraph, layout: &SmallCaseLayout) -> BTreeSet<EdgeId> {
    let mut f = BTreeSet::new();
    for (u, source) in layout.sources().map(|u| (u, true)).chain(layout.sinks().map(|u| (u, false))) {
        let private: BTreeSet<VertexId> = layout.w[&u].iter().copied().collect();
        for id in g.out_edges(u).chain(g.in_edges(u)) {
            let e = g.edge(id).expect("incident edge");
            let kept = if source {
                e.tail == u && private.contains(&e.head)
            } else {
                e.head == u && private.contains(&e.tail)
            };
            if !kept {
                f.insert(id);
            }
        }
    }
    f
}

/// Edge-disjoint paths for as many source–sink pairs as the matching
/// schedule allows; the pattern is the bipartite digraph of joined pairs.
pub fn immerse_biclique_small<T: Real>(
    host: &Arc<MultiDigraph>,
    k: usize,
    p: &DenseParams<T>,
) -> Result<Immersed<SmallCaseReport>> {
    let g: &MultiDigraph = host;
    let n = g.vertex_count();
    if k == 0 {
        return Err(Error::precondition("k must be positive"));
    }
    if p.strict {
        check_host(g, k, p, "small")?;
        if !small_case_applies(n, k) {
            return Err(Error::hypothesis("small", format!("k = {k} is below (log(n/k))^7 for n = {n}")));
        }
    }
    let layout = build_layout(g, k, p)?;
    let ab = layout.a * layout.b;
    let path_cap = p.small_path_cap_for(n, k);
    let mut forbidden = initial_forbidden(g, &layout);
    let initial = forbidden.len();
    let mut joined: BTreeMap<(VertexId, VertexId), Vec<EdgeId>> = BTreeMap::new();
    let mut touching: BTreeMap<VertexId, usize> = BTreeMap::new();
    let sources: BTreeSet<VertexId> = layout.sources().collect();
    let mut records = Vec::with_capacity(layout.matchings.len());
    let opts = ConnectOptions {
        allow_trivial: false,
        max_len: path_cap,
    };
    for m in &layout.matchings {
        // one pass is maximal: a pair with no path now has none later
        let mut rec = MatchingRecord {
            pairs: m.len(),
            connected: 0,
            longest: 0,
        };
        for &(x, y) in m {
            let path = match connect_avoiding(g, &[x], &[y], &forbidden, opts) {
                Ok(Connection::Path(t)) => t.into_edges(),
                Ok(Connection::Trivial(_)) => return Err(Error::internal("source equals sink")),
                Err(Error::NoPath(_)) => continue,
                Err(e) => return Err(e),
            };
            let mut touched = BTreeSet::new();
            for &id in &path {
                let e = g.edge(id).expect("path edge");
                touched.extend([e.tail, e.head].into_iter().filter(|v| sources.contains(v)));
            }
            for v in touched {
                let c = touching.entry(v).or_default();
                *c += 1;
                if *c > ab {
                    return Err(Error::internal(format!("more than ab = {ab} paths touch source {v}")));
                }
            }
            rec.connected += 1;
            rec.longest = rec.longest.max(path.len());
            forbidden.extend(&path);
            joined.insert((x, y), path);
        }
        records.push(rec);
    }
    let connected = joined.len();
    let stats = || {
        records
            .iter()
            .map(|r| format!("{}/{}", r.connected, r.pairs))
            .collect::<Vec<_>>()
            .join(" ")
    };
    if connected == 0 || (p.strict && 2 * connected < k * k) {
        return Err(Error::hypothesis(
            "small",
            format!("joined {connected} pairs, need {}; per matching: {}", (k * k).div_ceil(2), stats()),
        ));
    }

    let index: BTreeMap<VertexId, usize> = layout.sources().chain(layout.sinks()).enumerate().map(|(i, v)| (v, i)).collect();
    let mut pattern = MultiDigraph::new(2 * ab);
    let mut trails = BTreeMap::new();
    let mut ordered: Vec<_> = joined.into_iter().collect();
    ordered.sort_by_key(|((x, y), _)| (index[x], index[y]));
    for ((x, y), path) in ordered {
        let id = pattern.add_edge(VertexId(index[&x]), VertexId(index[&y]))?;
        trails.insert(id, path);
    }
    let vertex_map = index.iter().map(|(&v, &i)| (VertexId(i), v)).collect();
    let certificate = ImmersionCertificate::new(host.clone(), pattern, vertex_map, trails);
    let verdict = certificate.verify();
    if !verdict.is_valid() {
        return Err(Error::internal(format!("small-case certificate invalid: {verdict}")));
    }
    Ok(Immersed {
        certificate,
        report: SmallCaseReport {
            layout,
            path_cap,
            initial_forbidden: initial,
            matchings: records,
            connected,
        },
    })
}
