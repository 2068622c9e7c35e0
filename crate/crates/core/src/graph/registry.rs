use std::collections::BTreeMap;

use super::config::{build_graph, EdgeSpec, GraphConfig};
use super::{GraphError, GraphFamily, NeighborhoodGraph};
use crate::labels::Geometry;
use crate::records::records;

/// The full set of graphs a similarity computation needs: one topology
/// graph per geometry pair, plus the direction and metric graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphRegistry {
    graphs: BTreeMap<GraphFamily, NeighborhoodGraph>,
}

impl Default for GraphRegistry {
    fn default() -> Self {
        let graphs = GraphFamily::all()
            .into_iter()
            .map(|f| {
                let g = build_graph(f, &GraphConfig::default_for(f))
                    .expect("shipped graph configuration is valid");
                (f, g)
            })
            .collect();
        GraphRegistry { graphs }
    }
}

impl GraphRegistry {
    /// Default graphs with every graph named in `source` replaced by the
    /// definition given there.
    ///
    /// ```text
    /// node  <graph> <label>
    /// edge  <graph> <label> <label> [<weight>]
    /// group <graph> <groupId> <label>
    /// ```
    pub fn with_overrides(source: &str) -> Result<Self, GraphError> {
        let mut configs: BTreeMap<GraphFamily, GraphConfig> = BTreeMap::new();
        for rec in records(source) {
            let config_err = |detail: String| GraphError::Config {
                line: rec.line,
                detail,
            };
            let args = rec.args();
            let Some(name) = args.first() else {
                return Err(config_err(format!(
                    "`{}` record needs a graph name",
                    rec.kind()
                )));
            };
            let family: GraphFamily = name
                .parse()
                .map_err(|e: GraphError| config_err(e.to_string()))?;
            let cfg = configs.entry(family).or_insert_with(GraphConfig::empty);
            match (rec.kind(), &args[1..]) {
                ("node", [label]) => cfg.nodes.push(label.to_string()),
                ("edge", [a, b]) => cfg.edges.push(EdgeSpec::derived(*a, *b)),
                ("edge", [a, b, w]) => {
                    let w: i64 = w
                        .parse()
                        .map_err(|_| config_err(format!("invalid weight `{w}`")))?;
                    cfg.edges.push(EdgeSpec::weighted(*a, *b, w));
                }
                ("group", [id, label]) => match cfg.groups.iter_mut().find(|(g, _)| g == id) {
                    Some((_, members)) => members.push(label.to_string()),
                    None => cfg.groups.push((id.to_string(), vec![label.to_string()])),
                },
                ("node" | "edge" | "group", _) => {
                    return Err(config_err(format!("malformed `{}` record", rec.kind())))
                }
                (other, _) => return Err(config_err(format!("unknown record kind `{other}`"))),
            }
        }
        let mut registry = GraphRegistry::default();
        for (family, cfg) in configs {
            registry.graphs.insert(family, build_graph(family, &cfg)?);
        }
        Ok(registry)
    }

    pub fn get(&self, family: GraphFamily) -> &NeighborhoodGraph {
        &self.graphs[&family]
    }

    pub fn topology(&self, a: Geometry, b: Geometry) -> &NeighborhoodGraph {
        self.get(GraphFamily::topology(a, b))
    }

    pub fn direction(&self) -> &NeighborhoodGraph {
        self.get(GraphFamily::Direction)
    }

    pub fn metric(&self) -> &NeighborhoodGraph {
        self.get(GraphFamily::Metric)
    }

    pub fn iter(&self) -> impl Iterator<Item = &NeighborhoodGraph> {
        self.graphs.values()
    }
}
