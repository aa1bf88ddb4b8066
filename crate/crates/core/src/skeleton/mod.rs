//! Metric-graph skeleta, refinements with their retractions, finite towers,
//! and the ordered subdivision sets an edge acquires along a tower.

pub mod graph;
pub mod random;
pub mod refinement;
pub mod subdivision;
pub mod tower;

pub use graph::{Edge, GraphPoint, SkeletonGraph};
pub use refinement::{compose_check, composite, CuspPath, EmbeddingData, Refinement, Step};
pub use subdivision::{subdivision_union, CompletedSet, Cut, SubdivisionSet};
pub use tower::{tower_separation, ComposeReport, RefinementEntry, Tower, TowerFile};
