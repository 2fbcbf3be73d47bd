//! Certified immersions of complete digraphs in Eulerian digraphs of large
//! minimum degree.
//!
//! Every construction works on a [`LiftedGraph`], whose edges remember the
//! trails they stand for in a fixed host, and ends in an
//! [`ImmersionCertificate`] that can be checked on its own.

pub mod cycles;
pub mod dense;
pub mod error;
pub mod eulerian;
pub mod expanders;
pub mod graph;
pub mod immersion;
pub mod pipeline;
pub mod scalar;
pub mod search;

pub use error::{Error, Result};
pub use graph::{DegreeProfile, Edge, EdgeId, MultiDigraph, SimpleGraph, VertexId};
pub use immersion::{verify_certificate, ImmersionCertificate, LiftedGraph, Trail, ValidityReport};
pub use pipeline::{immerse_complete, PipelineRun, Profile, RunReport};
pub use scalar::Real;

/// Expansion parameters in double precision.
pub type Params = expanders::ExpansionParams<f64>;
/// Dense-step thresholds in double precision.
pub type DenseConfig = dense::DenseParams<f64>;
/// Pipeline constants in double precision.
pub type Constants = pipeline::Constants<f64>;
