use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiDigraph, VertexId};
use crate::immersion::Trail;
use crate::search::{bidirectional_path, shortest_nonempty_path};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectOptions {
    /// Accept a shared vertex of `X` and `Y` as a length-0 connection.
    pub allow_trivial: bool,
    pub max_len: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Connection {
    Trivial(VertexId),
    Path(Trail),
}

impl Connection {
    pub fn len(&self) -> usize {
        match self {
            Connection::Trivial(_) => 0,
            Connection::Path(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn trail(&self) -> Option<&Trail> {
        match self {
            Connection::Path(t) => Some(t),
            Connection::Trivial(_) => None,
        }
    }
}

/// Shortest route from `xs` to `ys` avoiding `forbidden`, found by growing
/// balls from both ends until they meet.
pub fn connect_avoiding(
    g: &MultiDigraph,
    xs: &[VertexId],
    ys: &[VertexId],
    forbidden: &BTreeSet<EdgeId>,
    opts: ConnectOptions,
) -> Result<Connection> {
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::precondition("both terminal sets must be nonempty"));
    }
    for &v in xs.iter().chain(ys) {
        g.check_vertex(v)?;
    }
    let targets: BTreeSet<VertexId> = ys.iter().copied().collect();
    let shared = xs.iter().copied().filter(|v| targets.contains(v)).min();
    let usable = |id: EdgeId| !forbidden.contains(&id);
    let found = match shared {
        Some(v) if opts.allow_trivial => return Ok(Connection::Trivial(v)),
        Some(_) => shortest_nonempty_path(g, xs, ys, usable, opts.max_len),
        None => bidirectional_path(g, xs, ys, usable, opts.max_len),
    };
    let edges = found.ok_or_else(|| {
        Error::NoPath(format!(
            "{} sources, {} targets, {} forbidden edges",
            xs.len(),
            ys.len(),
            forbidden.len()
        ))
    })?;
    let trail = Trail::new(g, edges)?;
    let ok = xs.contains(&trail.start())
        && targets.contains(&trail.end())
        && trail.edges().iter().all(|e| !forbidden.contains(e))
        && opts.max_len.is_none_or(|m| trail.len() <= m);
    if !ok {
        return Err(Error::internal("connecting trail violates its contract"));
    }
    Ok(Connection::Path(trail))
}
