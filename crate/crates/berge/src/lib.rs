//! Combinatorics of Berge-K4-free triple systems.
//!
//! A triple system is a 3-uniform hypergraph on vertices `0..n`. This crate
//! provides:
//!
//! * [`system`]: the [`TripleSystem`] container, the balanced 3-partite
//!   construction and its edge-count formula `f(n)`, degrees, codegrees and
//!   the uncovered-pairs graph, plus a plain text exchange format.
//! * [`detect`]: Berge-pattern detection. A host contains a Berge copy of a
//!   graph `G` when an injective core placement and a system of distinct
//!   host triples cover every pattern edge. Detection runs per core via
//!   bipartite matching and returns a checkable [`BergeEmbedding`].
//! * [`trace`]: the trace multigraph of a system over a small core set,
//!   surplus accounting, block/component structure, bad-component
//!   classification and the counting inequalities used to bound edge counts.
//! * [`search`]: exhaustive branch-and-bound over all triples (or all graph
//!   edges) with isomorph rejection, used to certify exact extremal values
//!   on small vertex counts.
//! * [`reference`]: independent brute-force implementations used to
//!   cross-check the optimized routines.

pub mod detect;
pub mod reference;
pub mod search;
pub mod system;
pub mod trace;

pub use detect::{
    expansion_of, find_berge, find_berge_triangle_anchored, find_berge_using, find_k43_minus_e,
    find_tight_path, is_berge_free, verify_embedding, AnchoredTriangle, BergeEmbedding,
    DetectMode, EdgeAssignment,
};
pub use search::{
    canonical_form, certify_extremal, graph_max_edges, max_edges, CertificationRecord,
    ForbiddenSpec, SearchConfig, SearchError, SearchResult, SearchStats, Witness,
};
pub use system::{
    balanced_3partite, diff, discrepancy_report, f, observation2_table, Pair, Partition3,
    PatternGraph, SimpleGraph, SystemError, Triple, TripleSystem,
};
pub use trace::{
    bound_report, bound_report_from_trace, check_bad_components_have_bad_block,
    check_multiplicity_props, check_no_sdr, check_toomany, classify_bad_component, toomany,
    BadComponentClass, BoundReport, Component, LabeledLink, LabeledLoop, MultiplicityViolation,
    Rat, SdrViolation, TraceError, TraceMultigraph, ZPartition,
};
