use std::collections::HashMap;
use std::str::FromStr;

use super::{GraphError, GraphFamily, NeighborhoodGraph};
use crate::labels::{Direction, Geometry, MetricCategory, TopoRelation};

/// One undirected edge. Without an explicit weight, a grouped graph
/// derives it: intra-group or inter-group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSpec {
    pub a: String,
    pub b: String,
    pub weight: Option<i64>,
}

impl EdgeSpec {
    pub fn derived(a: impl Into<String>, b: impl Into<String>) -> Self {
        EdgeSpec {
            a: a.into(),
            b: b.into(),
            weight: None,
        }
    }

    pub fn weighted(a: impl Into<String>, b: impl Into<String>, weight: i64) -> Self {
        EdgeSpec {
            a: a.into(),
            b: b.into(),
            weight: Some(weight),
        }
    }
}

/// Editable description of a neighborhood graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphConfig {
    pub nodes: Vec<String>,
    /// `(group id, members)`; must partition `nodes` when non-empty.
    pub groups: Vec<(String, Vec<String>)>,
    pub edges: Vec<EdgeSpec>,
    pub intra_weight: u32,
    pub inter_weight: u32,
}

pub const INTRA_GROUP_WEIGHT: u32 = 2;
pub const INTER_GROUP_WEIGHT: u32 = 3;
pub const DIRECTION_STEP_WEIGHT: u32 = 2;
pub const METRIC_STEP_WEIGHT: u32 = 1;

impl GraphConfig {
    pub fn empty() -> Self {
        GraphConfig {
            nodes: Vec::new(),
            groups: Vec::new(),
            edges: Vec::new(),
            intra_weight: INTRA_GROUP_WEIGHT,
            inter_weight: INTER_GROUP_WEIGHT,
        }
    }

    /// Shipped topology graph for a geometry pair. Polygon-polygon carries
    /// the full eight-relation network; other pairs use reduced vocabularies.
    pub fn default_topology(a: Geometry, b: Geometry) -> Self {
        use Geometry::*;
        let (nodes, adjacency): (&[&str], &[(&str, &str)]) = match GraphFamily::topology(a, b) {
            GraphFamily::Topology(Point, Point) => {
                (&["disjoint", "equal"], &[("disjoint", "equal")])
            }
            GraphFamily::Topology(Point, Line) | GraphFamily::Topology(Point, Polygon) => (
                &["disjoint", "meet", "inside", "contains"],
                &[
                    ("disjoint", "meet"),
                    ("meet", "inside"),
                    ("meet", "contains"),
                ],
            ),
            GraphFamily::Topology(Line, Line) => (
                &[
                    "disjoint",
                    "meet",
                    "overlap",
                    "equal",
                    "covers",
                    "coveredBy",
                ],
                &[
                    ("disjoint", "meet"),
                    ("meet", "overlap"),
                    ("overlap", "covers"),
                    ("overlap", "coveredBy"),
                    ("overlap", "equal"),
                    ("equal", "covers"),
                    ("equal", "coveredBy"),
                ],
            ),
            GraphFamily::Topology(Line, Polygon) => (
                &[
                    "disjoint",
                    "meet",
                    "overlap",
                    "covers",
                    "coveredBy",
                    "contains",
                    "inside",
                ],
                &[
                    ("disjoint", "meet"),
                    ("meet", "overlap"),
                    ("overlap", "covers"),
                    ("overlap", "coveredBy"),
                    ("covers", "contains"),
                    ("coveredBy", "inside"),
                ],
            ),
            _ => (
                &[
                    "disjoint",
                    "meet",
                    "overlap",
                    "equal",
                    "covers",
                    "coveredBy",
                    "contains",
                    "inside",
                ],
                &[
                    ("disjoint", "meet"),
                    ("meet", "overlap"),
                    ("overlap", "covers"),
                    ("overlap", "coveredBy"),
                    ("overlap", "equal"),
                    ("covers", "contains"),
                    ("coveredBy", "inside"),
                    ("equal", "covers"),
                    ("equal", "coveredBy"),
                ],
            ),
        };
        let groups = [
            ("G1", &["disjoint"][..]),
            ("G2", &["meet", "overlap"][..]),
            (
                "G3",
                &["equal", "covers", "coveredBy", "contains", "inside"][..],
            ),
        ];
        GraphConfig {
            nodes: nodes.iter().map(|s| s.to_string()).collect(),
            groups: groups
                .iter()
                .map(|(id, members)| {
                    let present = members
                        .iter()
                        .filter(|m| nodes.contains(m))
                        .map(|m| m.to_string())
                        .collect();
                    (id.to_string(), present)
                })
                .filter(|(_, m): &(String, Vec<String>)| !m.is_empty())
                .collect(),
            edges: adjacency
                .iter()
                .map(|(a, b)| EdgeSpec::derived(*a, *b))
                .collect(),
            intra_weight: INTRA_GROUP_WEIGHT,
            inter_weight: INTER_GROUP_WEIGHT,
        }
    }

    /// Compass ring with `step` per adjacent pair; with a hub weight, `same`
    /// is joined to all eight compass nodes.
    pub fn direction(step: i64, hub: Option<i64>) -> Self {
        let mut cfg = GraphConfig::empty();
        let ring = Direction::COMPASS;
        cfg.nodes = ring.iter().map(|d| d.to_string()).collect();
        for i in 0..ring.len() {
            cfg.edges.push(EdgeSpec::weighted(
                ring[i].as_str(),
                ring[(i + 1) % ring.len()].as_str(),
                step,
            ));
        }
        if let Some(w) = hub {
            cfg.nodes.push(Direction::Same.to_string());
            for d in ring {
                cfg.edges
                    .push(EdgeSpec::weighted(Direction::Same.as_str(), d.as_str(), w));
            }
        }
        cfg
    }

    pub fn default_direction() -> Self {
        Self::direction(
            DIRECTION_STEP_WEIGHT as i64,
            Some(DIRECTION_STEP_WEIGHT as i64),
        )
    }

    /// Chain equal - near - medium - far.
    pub fn metric(step: i64) -> Self {
        let mut cfg = GraphConfig::empty();
        let chain = MetricCategory::ALL;
        cfg.nodes = chain.iter().map(|c| c.to_string()).collect();
        for pair in chain.windows(2) {
            cfg.edges
                .push(EdgeSpec::weighted(pair[0].as_str(), pair[1].as_str(), step));
        }
        cfg
    }

    pub fn default_metric() -> Self {
        Self::metric(METRIC_STEP_WEIGHT as i64)
    }

    pub fn default_for(family: GraphFamily) -> Self {
        match family {
            GraphFamily::Topology(a, b) => Self::default_topology(a, b),
            GraphFamily::Direction => Self::default_direction(),
            GraphFamily::Metric => Self::default_metric(),
        }
    }
}

/// Replaces every label with the canonical spelling of its vocabulary.
fn canonicalize<T: FromStr + ToString>(
    cfg: &GraphConfig,
    family: GraphFamily,
    vocabulary: &'static str,
) -> Result<GraphConfig, GraphError> {
    let canon = |label: &str| -> Result<String, GraphError> {
        label
            .parse::<T>()
            .map(|v| v.to_string())
            .map_err(|_| GraphError::Vocabulary {
                graph: family.to_string(),
                label: label.to_string(),
                vocabulary,
            })
    };
    Ok(GraphConfig {
        nodes: cfg
            .nodes
            .iter()
            .map(|n| canon(n))
            .collect::<Result<_, _>>()?,
        groups: cfg
            .groups
            .iter()
            .map(|(id, ms)| {
                Ok((
                    id.clone(),
                    ms.iter().map(|m| canon(m)).collect::<Result<_, _>>()?,
                ))
            })
            .collect::<Result<_, GraphError>>()?,
        edges: cfg
            .edges
            .iter()
            .map(|e| {
                Ok(EdgeSpec {
                    a: canon(&e.a)?,
                    b: canon(&e.b)?,
                    weight: e.weight,
                })
            })
            .collect::<Result<_, GraphError>>()?,
        intra_weight: cfg.intra_weight,
        inter_weight: cfg.inter_weight,
    })
}

fn build(family: GraphFamily, cfg: &GraphConfig) -> Result<NeighborhoodGraph, GraphError> {
    let graph = family.to_string();
    let mut group_of: HashMap<&str, &str> = HashMap::new();
    for (id, members) in &cfg.groups {
        for m in members {
            if !cfg.nodes.contains(m) {
                return Err(GraphError::InvalidGroups {
                    graph,
                    detail: format!("`{m}` is not a node"),
                });
            }
            if group_of.insert(m, id).is_some() {
                return Err(GraphError::InvalidGroups {
                    graph,
                    detail: format!("`{m}` is in two groups"),
                });
            }
        }
    }
    if !cfg.groups.is_empty() {
        if let Some(n) = cfg
            .nodes
            .iter()
            .find(|n| !group_of.contains_key(n.as_str()))
        {
            return Err(GraphError::InvalidGroups {
                graph,
                detail: format!("`{n}` has no group"),
            });
        }
    }
    for (w, name) in [
        (cfg.intra_weight, "intra-group"),
        (cfg.inter_weight, "inter-group"),
    ] {
        if w == 0 && !cfg.groups.is_empty() {
            return Err(GraphError::InvalidWeight {
                graph,
                a: name.into(),
                b: name.into(),
                weight: 0,
            });
        }
    }

    let mut edges = Vec::with_capacity(cfg.edges.len());
    for e in &cfg.edges {
        let weight = match e.weight {
            Some(w) if w <= 0 || w > u32::MAX as i64 => {
                return Err(GraphError::InvalidWeight {
                    graph,
                    a: e.a.clone(),
                    b: e.b.clone(),
                    weight: w,
                })
            }
            Some(w) => w as u32,
            None if cfg.groups.is_empty() => {
                return Err(GraphError::MissingWeight {
                    graph,
                    a: e.a.clone(),
                    b: e.b.clone(),
                })
            }
            None => match (group_of.get(e.a.as_str()), group_of.get(e.b.as_str())) {
                (Some(ga), Some(gb)) if ga == gb => cfg.intra_weight,
                (Some(_), Some(_)) => cfg.inter_weight,
                _ => {
                    let label = if group_of.contains_key(e.a.as_str()) {
                        &e.b
                    } else {
                        &e.a
                    };
                    return Err(GraphError::UnknownLabel {
                        graph,
                        label: label.clone(),
                    });
                }
            },
        };
        edges.push((e.a.clone(), e.b.clone(), weight));
    }
    NeighborhoodGraph::new(family, cfg.nodes.clone(), edges)
}

/// Topology graph: edges weigh `intra_weight` inside a group, `inter_weight`
/// across groups; explicit edge weights override both.
pub fn build_topology_graph(
    a: Geometry,
    b: Geometry,
    cfg: &GraphConfig,
) -> Result<NeighborhoodGraph, GraphError> {
    let family = GraphFamily::topology(a, b);
    let cfg = canonicalize::<TopoRelation>(cfg, family, "topological relation")?;
    build(family, &cfg)
}

pub fn build_direction_graph(cfg: &GraphConfig) -> Result<NeighborhoodGraph, GraphError> {
    let cfg = canonicalize::<Direction>(cfg, GraphFamily::Direction, "direction")?;
    build(GraphFamily::Direction, &cfg)
}

pub fn build_metric_graph(cfg: &GraphConfig) -> Result<NeighborhoodGraph, GraphError> {
    let cfg = canonicalize::<MetricCategory>(cfg, GraphFamily::Metric, "metric category")?;
    build(GraphFamily::Metric, &cfg)
}

pub fn build_graph(
    family: GraphFamily,
    cfg: &GraphConfig,
) -> Result<NeighborhoodGraph, GraphError> {
    match family {
        GraphFamily::Topology(a, b) => build_topology_graph(a, b, cfg),
        GraphFamily::Direction => build_direction_graph(cfg),
        GraphFamily::Metric => build_metric_graph(cfg),
    }
}
