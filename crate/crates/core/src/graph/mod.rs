//! Conceptual neighborhood graphs and minimum transformation cost.
//!
//! A graph is a weighted undirected graph over qualitative labels. The
//! transformation cost between two labels is the weight of the cheapest
//! path joining them; all pairs are computed once at construction.

mod config;
mod registry;

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::labels::Geometry;

pub use config::{
    build_direction_graph, build_graph, build_metric_graph, build_topology_graph, EdgeSpec,
    GraphConfig,
};
pub use registry::GraphRegistry;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("{graph}: label `{label}` is not in the {vocabulary} vocabulary")]
    Vocabulary {
        graph: String,
        label: String,
        vocabulary: &'static str,
    },
    #[error("{graph}: label `{label}` is not a node")]
    UnknownLabel { graph: String, label: String },
    #[error("{graph}: edge ({a}, {b}) has invalid weight {weight}")]
    InvalidWeight {
        graph: String,
        a: String,
        b: String,
        weight: i64,
    },
    #[error("{graph}: edge ({a}, {b}) has no weight and the graph has no groups")]
    MissingWeight { graph: String, a: String, b: String },
    #[error("{graph}: self-loop on `{label}`")]
    SelfLoop { graph: String, label: String },
    #[error("{graph}: duplicate edge ({a}, {b})")]
    DuplicateEdge { graph: String, a: String, b: String },
    #[error("{graph}: duplicate node `{label}`")]
    DuplicateNode { graph: String, label: String },
    #[error("{graph}: graph is disconnected (`{label}` is unreachable)")]
    Disconnected { graph: String, label: String },
    #[error("{graph}: groups do not partition the nodes: {detail}")]
    InvalidGroups { graph: String, detail: String },
    #[error("unknown graph `{0}`")]
    UnknownGraph(String),
    #[error("line {line}: {detail}")]
    Config { line: usize, detail: String },
}

/// Which qualitative vocabulary a graph ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GraphFamily {
    /// Topological relations between two geometry kinds, stored with the
    /// kinds in canonical (point < line < polygon) order.
    Topology(Geometry, Geometry),
    Direction,
    Metric,
}

impl GraphFamily {
    pub fn topology(a: Geometry, b: Geometry) -> Self {
        if a <= b {
            GraphFamily::Topology(a, b)
        } else {
            GraphFamily::Topology(b, a)
        }
    }

    pub fn all() -> Vec<GraphFamily> {
        use Geometry::*;
        vec![
            GraphFamily::Topology(Point, Point),
            GraphFamily::Topology(Point, Line),
            GraphFamily::Topology(Point, Polygon),
            GraphFamily::Topology(Line, Line),
            GraphFamily::Topology(Line, Polygon),
            GraphFamily::Topology(Polygon, Polygon),
            GraphFamily::Direction,
            GraphFamily::Metric,
        ]
    }
}

impl fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphFamily::Topology(a, b) => write!(f, "topology-{a}-{b}"),
            GraphFamily::Direction => f.write_str("direction"),
            GraphFamily::Metric => f.write_str("metric"),
        }
    }
}

impl FromStr for GraphFamily {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || GraphError::UnknownGraph(s.to_string());
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "direction" => Ok(GraphFamily::Direction),
            "metric" => Ok(GraphFamily::Metric),
            _ => {
                let rest = lower.strip_prefix("topology-").ok_or_else(unknown)?;
                let (a, b) = rest.split_once('-').ok_or_else(unknown)?;
                let a: Geometry = a.parse().map_err(|_| unknown())?;
                let b: Geometry = b.parse().map_err(|_| unknown())?;
                Ok(GraphFamily::topology(a, b))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodGraph {
    family: GraphFamily,
    nodes: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize, u32)>,
    costs: Vec<Vec<u32>>,
}

impl NeighborhoodGraph {
    /// Validates and builds a graph, then caches all-pairs costs.
    pub fn new(
        family: GraphFamily,
        nodes: Vec<String>,
        edges: Vec<(String, String, u32)>,
    ) -> Result<Self, GraphError> {
        let graph = family.to_string();
        let mut index = HashMap::new();
        for (i, n) in nodes.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(GraphError::DuplicateNode {
                    graph,
                    label: n.clone(),
                });
            }
        }
        let mut seen = HashSet::new();
        let mut indexed = Vec::with_capacity(edges.len());
        for (a, b, w) in edges {
            let ia = *index.get(&a).ok_or_else(|| GraphError::UnknownLabel {
                graph: graph.clone(),
                label: a.clone(),
            })?;
            let ib = *index.get(&b).ok_or_else(|| GraphError::UnknownLabel {
                graph: graph.clone(),
                label: b.clone(),
            })?;
            if ia == ib {
                return Err(GraphError::SelfLoop { graph, label: a });
            }
            if w == 0 {
                return Err(GraphError::InvalidWeight {
                    graph,
                    a,
                    b,
                    weight: 0,
                });
            }
            if !seen.insert((ia.min(ib), ia.max(ib))) {
                return Err(GraphError::DuplicateEdge { graph, a, b });
            }
            indexed.push((ia, ib, w));
        }

        let mut g = NeighborhoodGraph {
            family,
            nodes,
            index,
            edges: indexed,
            costs: Vec::new(),
        };
        let adjacency = g.adjacency();
        let costs: Vec<Vec<Option<u32>>> = (0..g.nodes.len())
            .map(|s| dijkstra(&adjacency, s))
            .collect();
        if let Some(row) = costs.first() {
            if let Some(j) = row.iter().position(Option::is_none) {
                return Err(GraphError::Disconnected {
                    graph,
                    label: g.nodes[j].clone(),
                });
            }
        }
        g.costs = costs
            .into_iter()
            .map(|row| row.into_iter().map(|c| c.unwrap_or(u32::MAX)).collect())
            .collect();
        Ok(g)
    }

    fn adjacency(&self) -> Vec<Vec<(usize, u32)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(a, b, w) in &self.edges {
            adj[a].push((b, w));
            adj[b].push((a, w));
        }
        adj
    }

    pub fn family(&self) -> GraphFamily {
        self.family
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    /// Edges as `(label, label, weight)`.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, u32)> {
        self.edges
            .iter()
            .map(|&(a, b, w)| (self.nodes[a].as_str(), self.nodes[b].as_str(), w))
    }

    pub fn edge_weight(&self, a: &str, b: &str) -> Option<u32> {
        let (ia, ib) = (*self.index.get(a)?, *self.index.get(b)?);
        self.edges
            .iter()
            .find(|&&(x, y, _)| (x, y) == (ia, ib) || (x, y) == (ib, ia))
            .map(|e| e.2)
    }

    fn node(&self, label: &str) -> Result<usize, GraphError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| GraphError::UnknownLabel {
                graph: self.family.to_string(),
                label: label.to_string(),
            })
    }
}

fn dijkstra(adj: &[Vec<(usize, u32)>], source: usize) -> Vec<Option<u32>> {
    let mut dist: Vec<Option<u32>> = vec![None; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[source] = Some(0);
    heap.push(Reverse((0u32, source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if dist[u].is_some_and(|best| d > best) {
            continue;
        }
        for &(v, w) in &adj[u] {
            let nd = d + w;
            if dist[v].is_none_or(|cur| nd < cur) {
                dist[v] = Some(nd);
                heap.push(Reverse((nd, v)));
            }
        }
    }
    dist
}

/// Minimum transformation cost between two labels of `graph`.
pub fn mtc(graph: &NeighborhoodGraph, from: &str, to: &str) -> Result<u32, GraphError> {
    let (i, j) = (graph.node(from)?, graph.node(to)?);
    Ok(graph.costs[i][j])
}
