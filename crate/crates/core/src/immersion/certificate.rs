use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::trail::Trail;
use super::verify::{verify_certificate, ValidityReport};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiDigraph, VertexId};

/// Witness that `host` immerses `pattern`.
///
/// The raw maps are stored as given so that a tampered or hand-written
/// certificate can still be loaded and judged by [`verify_certificate`].
#[derive(Clone, Debug)]
pub struct ImmersionCertificate {
    host: Arc<MultiDigraph>,
    pattern: MultiDigraph,
    vertex_map: BTreeMap<VertexId, VertexId>,
    trails: BTreeMap<EdgeId, Vec<EdgeId>>,
}

impl ImmersionCertificate {
    pub fn new(
        host: Arc<MultiDigraph>,
        pattern: MultiDigraph,
        vertex_map: BTreeMap<VertexId, VertexId>,
        trails: BTreeMap<EdgeId, Vec<EdgeId>>,
    ) -> Self {
        ImmersionCertificate {
            host,
            pattern,
            vertex_map,
            trails,
        }
    }

    /// The host immerses itself: identity map, one single-edge trail per edge.
    pub fn identity(host: Arc<MultiDigraph>) -> Self {
        let pattern = (*host).clone();
        let vertex_map = host.vertices().map(|v| (v, v)).collect();
        let trails = host.edge_ids().map(|id| (id, vec![id])).collect();
        ImmersionCertificate::new(host, pattern, vertex_map, trails)
    }

    pub fn host(&self) -> &MultiDigraph {
        &self.host
    }

    pub fn host_arc(&self) -> &Arc<MultiDigraph> {
        &self.host
    }

    pub fn pattern(&self) -> &MultiDigraph {
        &self.pattern
    }

    pub fn vertex_map(&self) -> &BTreeMap<VertexId, VertexId> {
        &self.vertex_map
    }

    pub fn trails(&self) -> &BTreeMap<EdgeId, Vec<EdgeId>> {
        &self.trails
    }

    /// Image of a pattern vertex.
    pub fn image(&self, v: VertexId) -> Option<VertexId> {
        self.vertex_map.get(&v).copied()
    }

    /// The validated trail for a pattern edge.
    pub fn trail(&self, pattern_edge: EdgeId) -> Result<Trail> {
        let raw = self
            .trails
            .get(&pattern_edge)
            .ok_or_else(|| Error::input(format!("no trail for pattern edge {pattern_edge}")))?;
        Trail::new(&self.host, raw.clone())
    }

    pub fn verify(&self) -> ValidityReport {
        verify_certificate(self)
    }

    /// Longest trail, in edges.
    pub fn max_trail_len(&self) -> usize {
        self.trails.values().map(Vec::len).max().unwrap_or(0)
    }

    /// Chains `outer` (H in G) with `inner` (K in H) into K in G.
    pub fn compose(outer: &ImmersionCertificate, inner: &ImmersionCertificate) -> Result<Self> {
        if outer.pattern != *inner.host {
            return Err(Error::input(
                "outer certificate's pattern is not the inner certificate's host",
            ));
        }
        let mut vertex_map = BTreeMap::new();
        for (&k, &h) in &inner.vertex_map {
            let g = outer.image(h).ok_or_else(|| {
                Error::input(format!("inner image {h} has no image in the outer host"))
            })?;
            vertex_map.insert(k, g);
        }
        let mut trails = BTreeMap::new();
        for (&k_edge, h_trail) in &inner.trails {
            let mut g_trail = Vec::new();
            for h_edge in h_trail {
                let piece = outer.trails.get(h_edge).ok_or_else(|| {
                    Error::input(format!("outer certificate has no trail for {h_edge}"))
                })?;
                g_trail.extend_from_slice(piece);
            }
            trails.insert(k_edge, g_trail);
        }
        Ok(ImmersionCertificate::new(
            outer.host.clone(),
            inner.pattern.clone(),
            vertex_map,
            trails,
        ))
    }

    /// Sub-certificate for the pattern induced on `keep` (relabelled in order).
    pub fn restrict(&self, keep: &[VertexId]) -> Result<Self> {
        let pattern = self.pattern.induced(keep)?;
        let mut vertex_map = BTreeMap::new();
        for (i, v) in keep.iter().enumerate() {
            let img = self
                .image(*v)
                .ok_or_else(|| Error::input(format!("pattern vertex {v} unmapped")))?;
            vertex_map.insert(VertexId(i), img);
        }
        let trails = pattern
            .edge_ids()
            .map(|id| (id, self.trails.get(&id).cloned().unwrap_or_default()))
            .collect();
        Ok(ImmersionCertificate::new(
            self.host.clone(),
            pattern,
            vertex_map,
            trails,
        ))
    }

    pub fn to_file(&self) -> CertificateFile {
        CertificateFile {
            pattern_vertices: self.pattern.vertex_count(),
            pattern_edges: self
                .pattern
                .edges()
                .map(|(id, e)| [id.0, e.tail.0, e.head.0])
                .collect(),
            vertex_map: self.vertex_map.iter().map(|(p, h)| [p.0, h.0]).collect(),
            trails: self
                .trails
                .iter()
                .map(|(id, t)| TrailEntry {
                    pattern_edge: id.0,
                    host_edges: t.iter().map(|e| e.0).collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("certificate serialises")
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    /// Rebuilds a certificate from its file form against `host`. Succeeds for
    /// any structurally well-formed file; validity is the verifier's job.
    pub fn from_file(file: &CertificateFile, host: Arc<MultiDigraph>) -> Result<Self> {
        let mut pattern = MultiDigraph::new(file.pattern_vertices);
        for &[id, t, h] in &file.pattern_edges {
            pattern.insert_edge(EdgeId(id), VertexId(t), VertexId(h))?;
        }
        let vertex_map = file
            .vertex_map
            .iter()
            .map(|&[p, h]| (VertexId(p), VertexId(h)))
            .collect();
        let mut trails = BTreeMap::new();
        for entry in &file.trails {
            let seq = entry.host_edges.iter().map(|&e| EdgeId(e)).collect();
            if trails.insert(EdgeId(entry.pattern_edge), seq).is_some() {
                return Err(Error::input(format!(
                    "pattern edge {} listed twice",
                    entry.pattern_edge
                )));
            }
        }
        Ok(ImmersionCertificate::new(host, pattern, vertex_map, trails))
    }

    pub fn from_json(text: &str, host: Arc<MultiDigraph>) -> Result<Self> {
        let file: CertificateFile = serde_json::from_str(text)?;
        Self::from_file(&file, host)
    }

    pub fn read(path: impl AsRef<Path>, host: Arc<MultiDigraph>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?, host)
    }
}

/// On-disk certificate: the pattern, the vertex map as pairs, and one
/// sequence of host edge ids per pattern edge. The host is stored separately
/// in the graph text format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub pattern_vertices: usize,
    /// `[id, tail, head]` per pattern edge.
    pub pattern_edges: Vec<[usize; 3]>,
    /// `[pattern vertex, host vertex]` pairs.
    pub vertex_map: Vec<[usize; 2]>,
    pub trails: Vec<TrailEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrailEntry {
    pub pattern_edge: usize,
    pub host_edges: Vec<usize>,
}
