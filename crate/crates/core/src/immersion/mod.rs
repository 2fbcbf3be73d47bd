//! Immersion certificates and the split calculus that produces them.
//!
//! A [`LiftedGraph`] is a working multi-digraph whose every edge remembers the
//! trail in a fixed root graph that it stands for. Splitting and deleting
//! edges keeps those trails edge-disjoint, so any derived graph can be turned
//! into an [`ImmersionCertificate`] in the root with [`LiftedGraph::extract_certificate`].

mod certificate;
mod lifted;
mod trail;
mod verify;

pub use certificate::{CertificateFile, ImmersionCertificate};
pub use lifted::LiftedGraph;
pub use trail::Trail;
pub use verify::{verify_certificate, ValidityReport, Violation, Warning};
