//! Spatial distance between two queries' scene sets and the derived
//! similarity score.
//!
//! The distance has three integer components, each a minimum transformation
//! cost read off a neighborhood graph:
//!
//! * topological: between the scenes' relations, in the topology graph of
//!   the first scene's geometry pair;
//! * directional: between the scenes' orientations, in the direction graph;
//! * metric: summed over every cross pair of objects, the cost of moving
//!   from `equal` to the pair's metric category.
//!
//! Multi-scene sets aggregate the first two over all scene pairs (or over a
//! minimum-cost assignment, when requested). An empty scene set contributes
//! zero everywhere. Similarity is `1 / (1 + total)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use thiserror::Error;

use crate::context::{ContextError, SpatialContext};
use crate::decimal::format_rational;
use crate::graph::{mtc, GraphError, GraphRegistry, NeighborhoodGraph};
use crate::labels::{MetricCategory, TopoRelation};
use crate::scene::{SceneSet, SpatialScene};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    Topological,
    Directional,
    Metric,
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Component::Topological => "topological",
            Component::Directional => "directional",
            Component::Metric => "metric",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComponentError {
    #[error(transparent)]
    Context(#[from] ContextError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("relation `{relation}` is not in graph {graph}")]
    RelationNotInFamily {
        relation: TopoRelation,
        graph: String,
    },
    #[error("assignment over {0} scenes is too large")]
    TooManyScenes(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{component}: {source}")]
pub struct SimilarityError {
    pub component: Component,
    pub source: ComponentError,
}

trait Labeled<T> {
    fn component(self, component: Component) -> Result<T, SimilarityError>;
}

impl<T, E: Into<ComponentError>> Labeled<T> for Result<T, E> {
    fn component(self, component: Component) -> Result<T, SimilarityError> {
        self.map_err(|e| SimilarityError {
            component,
            source: e.into(),
        })
    }
}

/// How per-scene costs combine when a query invokes several scenes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Aggregation {
    /// Sum over the full |A| x |B| cost matrix.
    #[default]
    Sum,
    /// Cheapest one-to-one matching of the smaller side into the larger.
    MinAssignment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SimilarityOptions {
    pub aggregation: Aggregation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceBreakdown {
    pub topological: u64,
    pub directional: u64,
    pub metric: u64,
    pub total: u64,
    pub similarity: Ratio<u64>,
}

impl DistanceBreakdown {
    pub fn new(topological: u64, directional: u64, metric: u64) -> Self {
        let total = topological + directional + metric;
        DistanceBreakdown {
            topological,
            directional,
            metric,
            total,
            similarity: similarity_from_total(total),
        }
    }

    pub fn similarity_f64(&self) -> f64 {
        *self.similarity.numer() as f64 / *self.similarity.denom() as f64
    }
}

impl fmt::Display for DistanceBreakdown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "topological={} directional={} metric={} total={} similarity={}",
            self.topological,
            self.directional,
            self.metric,
            self.total,
            format_similarity(self.similarity)
        )
    }
}

pub fn similarity_from_total(total: u64) -> Ratio<u64> {
    Ratio::new(1, total + 1)
}

pub fn to_big(r: Ratio<u64>) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Six fractional digits, round-half-even.
pub fn format_similarity(r: Ratio<u64>) -> String {
    format_rational(&to_big(r), 6)
}

fn aggregate(costs: &[Vec<u64>], aggregation: Aggregation) -> Result<u64, ComponentError> {
    match aggregation {
        Aggregation::Sum => Ok(costs.iter().flatten().sum()),
        Aggregation::MinAssignment => min_assignment(costs),
    }
}

/// Bitmask DP over the columns of the larger side.
fn min_assignment(costs: &[Vec<u64>]) -> Result<u64, ComponentError> {
    let rows = costs.len();
    let cols = costs.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Ok(0);
    }
    let transposed: Vec<Vec<u64>>;
    let (m, r, c) = if rows <= cols {
        (costs, rows, cols)
    } else {
        transposed = (0..cols)
            .map(|j| (0..rows).map(|i| costs[i][j]).collect())
            .collect();
        (&transposed[..], cols, rows)
    };
    if c > 20 {
        return Err(ComponentError::TooManyScenes(c));
    }
    let mut dp = vec![u64::MAX; 1 << c];
    dp[0] = 0;
    let mut best = u64::MAX;
    for mask in 0..(1usize << c) {
        if dp[mask] == u64::MAX {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == r {
            best = best.min(dp[mask]);
            continue;
        }
        for (j, &cost) in m[row].iter().enumerate() {
            if mask & (1 << j) == 0 {
                let next = mask | (1 << j);
                dp[next] = dp[next].min(dp[mask] + cost);
            }
        }
    }
    Ok(best)
}

fn topology_graph<'g>(
    scene: &SpatialScene,
    ctx: &SpatialContext,
    graphs: &'g GraphRegistry,
) -> Result<&'g NeighborhoodGraph, ComponentError> {
    let ga = ctx.geometry(&scene.object_a)?;
    let gb = ctx.geometry(&scene.object_b)?;
    Ok(graphs.topology(ga, gb))
}

fn relation_cost(
    graph: &NeighborhoodGraph,
    from: TopoRelation,
    to: TopoRelation,
) -> Result<u64, ComponentError> {
    for r in [from, to] {
        if !graph.contains(r.as_str()) {
            return Err(ComponentError::RelationNotInFamily {
                relation: r,
                graph: graph.family().to_string(),
            });
        }
    }
    Ok(mtc(graph, from.as_str(), to.as_str())? as u64)
}

fn topological(
    a: &SceneSet,
    b: &SceneSet,
    ctx: &SpatialContext,
    graphs: &GraphRegistry,
    opts: SimilarityOptions,
) -> Result<u64, ComponentError> {
    if a.is_empty() || b.is_empty() {
        return Ok(0);
    }
    let mut costs = Vec::with_capacity(a.len());
    for sa in a.scenes() {
        let graph = topology_graph(sa, ctx, graphs)?;
        let row = b
            .scenes()
            .iter()
            .map(|sb| relation_cost(graph, sa.relation, sb.relation))
            .collect::<Result<Vec<_>, _>>()?;
        costs.push(row);
    }
    aggregate(&costs, opts.aggregation)
}

fn directional(
    a: &SceneSet,
    b: &SceneSet,
    ctx: &SpatialContext,
    graphs: &GraphRegistry,
    opts: SimilarityOptions,
) -> Result<u64, ComponentError> {
    if a.is_empty() || b.is_empty() {
        return Ok(0);
    }
    let orient = |set: &SceneSet| {
        set.scenes()
            .iter()
            .map(|s| ctx.orientation_of(&s.object_a, &s.object_b))
            .collect::<Result<Vec<_>, _>>()
    };
    let (oa, ob) = (orient(a)?, orient(b)?);
    let graph = graphs.direction();
    let mut costs = Vec::with_capacity(oa.len());
    for da in &oa {
        let row = ob
            .iter()
            .map(|db| mtc(graph, da.as_str(), db.as_str()).map(u64::from))
            .collect::<Result<Vec<_>, _>>()?;
        costs.push(row);
    }
    aggregate(&costs, opts.aggregation)
}

fn metric(
    a: &SceneSet,
    b: &SceneSet,
    ctx: &SpatialContext,
    graphs: &GraphRegistry,
) -> Result<u64, ComponentError> {
    let graph = graphs.metric();
    let origin = MetricCategory::Equal.as_str();
    let mut sum = 0;
    for oi in a.objects() {
        for oj in b.objects() {
            let category = ctx.metric_category_of(oi, oj)?;
            sum += mtc(graph, origin, category.as_str())? as u64;
        }
    }
    Ok(sum)
}

pub fn topological_distance(
    a: &SceneSet,
    b: &SceneSet,
    ctx: &SpatialContext,
    graphs: &GraphRegistry,
) -> Result<u64, SimilarityError> {
    topological(a, b, ctx, graphs, SimilarityOptions::default()).component(Component::Topological)
}

pub fn directional_distance(
    a: &SceneSet,
    b: &SceneSet,
    ctx: &SpatialContext,
    graphs: &GraphRegistry,
) -> Result<u64, SimilarityError> {
    directional(a, b, ctx, graphs, SimilarityOptions::default()).component(Component::Directional)
}

pub fn metric_distance(
    a: &SceneSet,
    b: &SceneSet,
    ctx: &SpatialContext,
    graphs: &GraphRegistry,
) -> Result<u64, SimilarityError> {
    metric(a, b, ctx, graphs).component(Component::Metric)
}

pub fn spatial_distance(
    a: &SceneSet,
    b: &SceneSet,
    ctx: &SpatialContext,
    graphs: &GraphRegistry,
) -> Result<DistanceBreakdown, SimilarityError> {
    spatial_distance_with(a, b, ctx, graphs, SimilarityOptions::default())
}

pub fn spatial_distance_with(
    a: &SceneSet,
    b: &SceneSet,
    ctx: &SpatialContext,
    graphs: &GraphRegistry,
    opts: SimilarityOptions,
) -> Result<DistanceBreakdown, SimilarityError> {
    let t = topological(a, b, ctx, graphs, opts).component(Component::Topological)?;
    let d = directional(a, b, ctx, graphs, opts).component(Component::Directional)?;
    let m = metric(a, b, ctx, graphs).component(Component::Metric)?;
    Ok(DistanceBreakdown::new(t, d, m))
}

pub fn similarity(
    a: &SceneSet,
    b: &SceneSet,
    ctx: &SpatialContext,
    graphs: &GraphRegistry,
) -> Result<Ratio<u64>, SimilarityError> {
    spatial_distance(a, b, ctx, graphs).map(|d| d.similarity)
}
