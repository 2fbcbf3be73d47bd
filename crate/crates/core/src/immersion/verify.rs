//! Standalone certificate checker.
//!
//! Works from the raw maps only and shares no code with the constructions
//! that produce certificates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::certificate::ImmersionCertificate;
use crate::graph::{EdgeId, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    UnmappedVertex { pattern_vertex: VertexId },
    ImageOutOfRange { pattern_vertex: VertexId, image: VertexId },
    UnknownPatternVertex { pattern_vertex: VertexId },
    NotInjective { first: VertexId, second: VertexId, image: VertexId },
    MissingTrail { pattern_edge: EdgeId },
    UnknownPatternEdge { pattern_edge: EdgeId },
    EmptyTrail { pattern_edge: EdgeId },
    UnknownHostEdge { pattern_edge: EdgeId, host_edge: EdgeId },
    Discontinuous { pattern_edge: EdgeId, position: usize },
    RepeatedEdge { pattern_edge: EdgeId, host_edge: EdgeId },
    WrongStart { pattern_edge: EdgeId, expected: VertexId, found: VertexId },
    WrongEnd { pattern_edge: EdgeId, expected: VertexId, found: VertexId },
    SharedEdge { first: EdgeId, second: EdgeId, host_edge: EdgeId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            UnmappedVertex { pattern_vertex } => write!(f, "pattern vertex {pattern_vertex} has no image"),
            ImageOutOfRange { pattern_vertex, image } => {
                write!(f, "pattern vertex {pattern_vertex} maps to {image}, not a host vertex")
            }
            UnknownPatternVertex { pattern_vertex } => {
                write!(f, "vertex map mentions {pattern_vertex}, not a pattern vertex")
            }
            NotInjective { first, second, image } => {
                write!(f, "pattern vertices {first} and {second} both map to {image}")
            }
            MissingTrail { pattern_edge } => write!(f, "pattern edge {pattern_edge} has no trail"),
            UnknownPatternEdge { pattern_edge } => {
                write!(f, "trail given for {pattern_edge}, not a pattern edge")
            }
            EmptyTrail { pattern_edge } => write!(f, "trail for {pattern_edge} is empty"),
            UnknownHostEdge { pattern_edge, host_edge } => {
                write!(f, "trail for {pattern_edge} uses {host_edge}, not a host edge")
            }
            Discontinuous { pattern_edge, position } => {
                write!(f, "trail for {pattern_edge} breaks before position {position}")
            }
            RepeatedEdge { pattern_edge, host_edge } => {
                write!(f, "trail for {pattern_edge} uses {host_edge} twice")
            }
            WrongStart { pattern_edge, expected, found } => {
                write!(f, "trail for {pattern_edge} starts at {found}, expected {expected}")
            }
            WrongEnd { pattern_edge, expected, found } => {
                write!(f, "trail for {pattern_edge} ends at {found}, expected {expected}")
            }
            SharedEdge { first, second, host_edge } => {
                write!(f, "trails for {first} and {second} share {host_edge}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Warning {
    /// The trail revisits a vertex, so it is not a vertex-simple path.
    RepeatedVertex { pattern_edge: EdgeId, vertex: VertexId },
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidityReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Warning>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            write!(f, "valid")?;
        } else {
            write!(f, "invalid ({} violations)", self.violations.len())?;
            for v in &self.violations {
                write!(f, "\n  {v}")?;
            }
        }
        if !self.warnings.is_empty() {
            write!(f, "\n  {} trails revisit a vertex", self.warnings.len())?;
        }
        Ok(())
    }
}

pub fn verify_certificate(cert: &ImmersionCertificate) -> ValidityReport {
    let host = cert.host();
    let pattern = cert.pattern();
    let map = cert.vertex_map();
    let mut report = ValidityReport::default();

    // vertex map: total on the pattern, into the host, injective
    let mut owner: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for p in 0..pattern.vertex_count() {
        let p = VertexId(p);
        match map.get(&p) {
            None => report.violations.push(Violation::UnmappedVertex { pattern_vertex: p }),
            Some(&h) if h.0 >= host.vertex_count() => report
                .violations
                .push(Violation::ImageOutOfRange { pattern_vertex: p, image: h }),
            Some(&h) => {
                if let Some(&first) = owner.get(&h) {
                    report.violations.push(Violation::NotInjective {
                        first,
                        second: p,
                        image: h,
                    });
                } else {
                    owner.insert(h, p);
                }
            }
        }
    }
    for &p in map.keys() {
        if p.0 >= pattern.vertex_count() {
            report
                .violations
                .push(Violation::UnknownPatternVertex { pattern_vertex: p });
        }
    }

    let trails = cert.trails();
    for &id in trails.keys() {
        if !pattern.contains_edge(id) {
            report
                .violations
                .push(Violation::UnknownPatternEdge { pattern_edge: id });
        }
    }

    let mut used_by: BTreeMap<EdgeId, EdgeId> = BTreeMap::new();
    for (pid, pe) in pattern.edges() {
        let Some(seq) = trails.get(&pid) else {
            report
                .violations
                .push(Violation::MissingTrail { pattern_edge: pid });
            continue;
        };
        if seq.is_empty() {
            report.violations.push(Violation::EmptyTrail { pattern_edge: pid });
            continue;
        }
        let mut own = BTreeSet::new();
        let mut visited = BTreeSet::new();
        let mut at: Option<VertexId> = None;
        let mut start: Option<VertexId> = None;
        let mut intact = true;
        for (pos, &hid) in seq.iter().enumerate() {
            let Some(he) = host.edge(hid) else {
                report.violations.push(Violation::UnknownHostEdge {
                    pattern_edge: pid,
                    host_edge: hid,
                });
                intact = false;
                break;
            };
            match at {
                None => {
                    start = Some(he.tail);
                    visited.insert(he.tail);
                }
                Some(v) if v != he.tail => {
                    report.violations.push(Violation::Discontinuous {
                        pattern_edge: pid,
                        position: pos,
                    });
                    intact = false;
                }
                Some(_) => {}
            }
            if !own.insert(hid) {
                report.violations.push(Violation::RepeatedEdge {
                    pattern_edge: pid,
                    host_edge: hid,
                });
            }
            if let Some(&first) = used_by.get(&hid) {
                if first != pid {
                    report.violations.push(Violation::SharedEdge {
                        first,
                        second: pid,
                        host_edge: hid,
                    });
                }
            } else {
                used_by.insert(hid, pid);
            }
            if !visited.insert(he.head) && pos + 1 < seq.len() {
                report.warnings.push(Warning::RepeatedVertex {
                    pattern_edge: pid,
                    vertex: he.head,
                });
            }
            at = Some(he.head);
        }
        if !intact {
            continue;
        }
        if let (Some(s), Some(&want)) = (start, map.get(&pe.tail)) {
            if s != want {
                report.violations.push(Violation::WrongStart {
                    pattern_edge: pid,
                    expected: want,
                    found: s,
                });
            }
        }
        if let (Some(e), Some(&want)) = (at, map.get(&pe.head)) {
            if e != want {
                report.violations.push(Violation::WrongEnd {
                    pattern_edge: pid,
                    expected: want,
                    found: e,
                });
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::graph::MultiDigraph;

    fn cycle4() -> Arc<MultiDigraph> {
        Arc::new(MultiDigraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap())
    }

    #[test]
    fn identity_is_valid() {
        let c = ImmersionCertificate::identity(cycle4());
        let r = verify_certificate(&c);
        assert!(r.is_valid(), "{r}");
    }

    #[test]
    fn routed_pattern_edge_is_valid() {
        // pattern a -> c in the 4-cycle a b c d, routed along ab, bc
        let c = ImmersionCertificate::new(
            cycle4(),
            MultiDigraph::from_edges(2, [(0, 1)]).unwrap(),
            BTreeMap::from([(VertexId(0), VertexId(0)), (VertexId(1), VertexId(2))]),
            BTreeMap::from([(EdgeId(0), vec![EdgeId(0), EdgeId(1)])]),
        );
        assert!(verify_certificate(&c).is_valid());
    }

    #[test]
    fn shared_edge_names_both_pattern_edges() {
        let c = ImmersionCertificate::new(
            cycle4(),
            MultiDigraph::from_edges(3, [(0, 1), (0, 2)]).unwrap(),
            BTreeMap::from([
                (VertexId(0), VertexId(0)),
                (VertexId(1), VertexId(1)),
                (VertexId(2), VertexId(2)),
            ]),
            BTreeMap::from([
                (EdgeId(0), vec![EdgeId(0)]),
                (EdgeId(1), vec![EdgeId(0), EdgeId(1)]),
            ]),
        );
        let r = verify_certificate(&c);
        assert!(!r.is_valid());
        assert!(r.violations.contains(&Violation::SharedEdge {
            first: EdgeId(0),
            second: EdgeId(1),
            host_edge: EdgeId(0)
        }));
    }

    #[test]
    fn detects_each_kind_of_breakage() {
        let host = cycle4();
        let pattern = MultiDigraph::from_edges(2, [(0, 1)]).unwrap();
        let good_map = BTreeMap::from([(VertexId(0), VertexId(0)), (VertexId(1), VertexId(2))]);

        let check = |map: BTreeMap<VertexId, VertexId>, trail: Vec<EdgeId>| {
            let c = ImmersionCertificate::new(
                host.clone(),
                pattern.clone(),
                map,
                BTreeMap::from([(EdgeId(0), trail)]),
            );
            verify_certificate(&c).violations
        };

        let v = check(good_map.clone(), vec![EdgeId(0), EdgeId(2)]);
        assert!(matches!(v[0], Violation::Discontinuous { .. }));
        let v = check(good_map.clone(), vec![EdgeId(0), EdgeId(9)]);
        assert!(matches!(v[0], Violation::UnknownHostEdge { .. }));
        let v = check(good_map.clone(), vec![EdgeId(1)]);
        assert!(v.iter().any(|x| matches!(x, Violation::WrongStart { .. })));
        let v = check(good_map.clone(), vec![EdgeId(0)]);
        assert!(matches!(v[0], Violation::WrongEnd { .. }));
        let v = check(good_map, vec![]);
        assert!(matches!(v[0], Violation::EmptyTrail { .. }));
        let same = BTreeMap::from([(VertexId(0), VertexId(0)), (VertexId(1), VertexId(0))]);
        let v = check(same, vec![EdgeId(0), EdgeId(1), EdgeId(2), EdgeId(3)]);
        assert!(matches!(v[0], Violation::NotInjective { .. }));
    }

    #[test]
    fn closed_loop_route_flags_repeated_vertex() {
        let host = Arc::new(
            MultiDigraph::from_edges(3, [(0, 1), (1, 0), (0, 2)]).unwrap(),
        );
        let c = ImmersionCertificate::new(
            host,
            MultiDigraph::from_edges(2, [(0, 1)]).unwrap(),
            BTreeMap::from([(VertexId(0), VertexId(0)), (VertexId(1), VertexId(2))]),
            BTreeMap::from([(EdgeId(0), vec![EdgeId(0), EdgeId(1), EdgeId(2)])]),
        );
        let r = verify_certificate(&c);
        assert!(r.is_valid());
        assert_eq!(r.warnings.len(), 1);
    }
}
