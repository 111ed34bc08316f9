//! Monte Carlo laboratory for combinatorial optimization on randomly
//! weighted dense graphs with random augmenting edges.
//!
//! The lab builds regular graph ensembles (circulants, random regular
//! bipartite graphs, bridged extremal constructions), adds random edges,
//! assigns random weights, and runs exact optimizers — minimum spanning
//! trees, instrumented shortest paths, and incremental minimum-weight
//! bipartite matchings — so their Monte Carlo estimates can be compared
//! against closed-form theory values at desk scale.

pub mod analysis;
pub mod diagnostics;
pub mod ensembles;
pub mod graph;
pub mod harness;
pub mod matching;
pub mod mst;
pub mod rng;
pub mod shortest_path;

/// Repository-wide default base seed; `AWL_SEED` overrides it at the CLI.
pub const DEFAULT_BASE_SEED: u64 = 271_828;

pub use graph::{Graph, GraphError, GraphKind, WeightedGraph};
pub use rng::{RandomSource, WeightDistribution};
