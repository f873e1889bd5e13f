//! Triangle packings in randomly perturbed graphs `G ∪ G(n, p)`.
//!
//! * [`graph`]: bitset graphs and vertex sets.
//! * [`generators`]: random models and deterministic constructions.
//! * [`overlay`]: lazily evaluated `G(n, p)` with exact round splitting.
//! * [`oracle`]: exact packings, matchings and Hall violators for ground truth.
//! * [`regularity`], [`stability`]: pair and partition testers.
//! * [`packing`]: the constructive pipelines.
//! * [`experiments`]: Monte Carlo trials, sweeps and failure certificates.

pub mod error;
pub mod experiments;
pub mod generators;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod overlay;
pub mod packing;
pub mod regularity;
pub mod rng;
pub mod stability;

pub use error::{Error, Result};
pub use graph::{Graph, GraphBuilder, VertexSet};
pub use oracle::{Matching, TrianglePacking};
pub use overlay::Overlay;
pub use packing::{PackOutcome, StarFamily};
pub use rng::Seed;
