//! Graph sums over balanced weightings, constant terms of multivariate
//! elliptic functions, and the combinatorial identities used with them.

pub mod combinatorics;
pub mod fourier;
pub mod graph;
pub mod me;

pub use combinatorics::{
    euler_maclaurin_check, euler_maclaurin_suite, permutations, residue_relation_samples, residue_relations_check,
    worpitzky_check, EMPoly,
};
pub use graph::{
    analytic_profiles, balanced_enumerate, connected_multigraphs, direct_profiles, dual_pipeline_check,
    graph_sum_analytic, graph_sum_direct, loop_factor, WeightedGraph,
};
pub use me::{
    anomaly_residue_check, anomaly_samples, anomaly_sides, const_term_multi, const_term_single, ConstTerm, CtMode,
    MEElement, SingleConstTerm,
};
