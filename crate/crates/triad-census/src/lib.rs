//! Triad census for sparse directed graphs.
//!
//! The census counts, for every unordered vertex triple, which of the 16
//! isomorphism classes (or 64 labelled configurations) the induced
//! sub-digraph belongs to. The algorithm here is the subquadratic O(mΔ)
//! formulation: it enumerates connected canonical dyads, credits the dyadic
//! triads in bulk, walks the joint neighbourhood for connected triads, and
//! closes the books with the null-triad count. On top of that sit task-queue
//! partitioning with two load-balancing strategies and a worker-pool
//! executor with selectable census merging.
//!
//! See the `guide` module (rendered from the mdbook under `book/`) for a
//! narrative walk-through.

pub mod graph;
pub mod ingest;
pub mod triad;

pub use graph::{BuildStats, CrsAdjacency, DegreeStats, Digraph, GraphError, VertexId};
pub use triad::{
    census_bruteforce, census_sequential, census_sequential_with_stats, null_count, triad_code,
    triple_count, CensusArray, CensusError, CensusMode, CensusStats, DyadInfo, TriadClassifier,
    CLASS_LABELS,
};
