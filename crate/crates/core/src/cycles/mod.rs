//! Short cycles in dense digraphs and the passage from a dense Eulerian
//! digraph to a complete-digraph immersion through edge-disjoint cycles.

mod clique;
mod pack;
mod simple_edges;
mod undirected;
mod weighted;

pub use clique::{dense_to_complete, lift_directed_clique, strict_sizes, AuxiliaryGraph, CliqueParams, CliqueReport};
pub use pack::{is_normalized, multi_in_out, normalize_multiedges, pack_cycles, pack_length_cap, CyclePack, NormalizeStats, PackStep};
pub use simple_edges::{few_simple_edge_cycle, CycleRoute, FewSimpleCycle, ReachPartition};
pub use undirected::{undirected_clique_immersion, CliqueStrategy, UndirectedCliqueImmersion};
pub use weighted::{
    closed_walk_to_cycle, dense_core_diagnostic, short_cycle_weighted, weighted_cycle_bound, CoreDiagnostic,
    WeightedDigraph,
};
