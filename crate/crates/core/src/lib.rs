//! Spatial similarity between MDX queries.
//!
//! Queries are parsed into an AST, reduced to the spatial scenes they
//! invoke, and compared along topology, direction and metric distance using
//! conceptual neighborhood graphs. On top of that sit a session-log
//! recommender and a rank-correlation harness for human judgments.

pub mod cli;
pub mod context;
pub mod decimal;
pub mod eval;
pub mod graph;
pub mod labels;
pub mod mdx;
pub mod recommend;
mod records;
pub mod scene;
pub mod schema;
pub mod similarity;

pub use context::{ContextError, SpatialContext, SpatialObject};
pub use graph::{mtc, GraphError, GraphFamily, GraphRegistry, NeighborhoodGraph};
pub use labels::{Direction, Geometry, MetricCategory, TopoRelation};
pub use mdx::{extract_references, extract_scenes, parse_query, QueryAst, QueryReferences};
pub use scene::{SceneSet, SpatialScene};
pub use schema::CubeSchema;
pub use similarity::{similarity, spatial_distance, DistanceBreakdown};
