#![allow(dead_code)]

use std::path::PathBuf;

use proptest::prelude::*;
use solap_sim::{
    Direction, Geometry, MetricCategory, SceneSet, SpatialContext, SpatialScene, TopoRelation,
};

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(rel)
}

pub fn read_fixture(rel: &str) -> String {
    std::fs::read_to_string(fixture(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn example_context() -> SpatialContext {
    SpatialContext::parse(&read_fixture("example/example.ctx")).unwrap()
}

pub fn example_scenes(q: &str) -> SceneSet {
    let ast = solap_sim::parse_query(&read_fixture(&format!("example/{q}.mdx"))).unwrap();
    solap_sim::extract_scenes(&ast, &example_context()).unwrap()
}

pub const OBJECTS: [&str; 4] = ["a", "b", "c", "d"];

/// Every fact of a small all-polygon context, one entry per unordered pair.
#[derive(Debug, Clone)]
pub struct SmallWorld {
    pub n: usize,
    pub relations: Vec<(usize, usize, TopoRelation)>,
    pub orientations: Vec<(usize, usize, Direction)>,
    pub metrics: Vec<(usize, usize, MetricCategory)>,
    pub self_metrics: Vec<(usize, MetricCategory)>,
}

impl SmallWorld {
    pub fn context(&self) -> SpatialContext {
        let mut ctx = SpatialContext::default();
        for o in &OBJECTS[..self.n] {
            ctx = ctx.with_object(o, Geometry::Polygon).unwrap();
        }
        for &(i, j, r) in &self.relations {
            ctx = ctx.with_relation(OBJECTS[i], OBJECTS[j], r).unwrap();
        }
        for &(i, j, d) in &self.orientations {
            ctx = ctx.with_orientation(OBJECTS[i], OBJECTS[j], d).unwrap();
        }
        for &(i, j, c) in &self.metrics {
            ctx = ctx.with_metric(OBJECTS[i], OBJECTS[j], c).unwrap();
        }
        for &(i, c) in &self.self_metrics {
            ctx = ctx.with_metric(OBJECTS[i], OBJECTS[i], c).unwrap();
        }
        ctx
    }

    /// Single scene over an ordered pair, using the stored relation
    /// (or its converse when the pair is reversed).
    pub fn scene(&self, i: usize, j: usize) -> SpatialScene {
        let r = self
            .relations
            .iter()
            .find_map(|&(x, y, r)| {
                if (x, y) == (i, j) {
                    Some(r)
                } else if (y, x) == (i, j) {
                    Some(r.converse())
                } else {
                    None
                }
            })
            .unwrap();
        SpatialScene::new(OBJECTS[i], r, OBJECTS[j])
    }
}

fn any_relation() -> impl Strategy<Value = TopoRelation> {
    prop::sample::select(
        TopoRelation::ALL
            .iter()
            .copied()
            .filter(|r| *r != TopoRelation::Equal)
            .collect::<Vec<_>>(),
    )
}

fn any_compass() -> impl Strategy<Value = Direction> {
    prop::sample::select(Direction::ALL.to_vec())
}

fn any_category() -> impl Strategy<Value = MetricCategory> {
    prop::sample::select(MetricCategory::ALL.to_vec())
}

/// 2 to 4 polygons, fully related, with random pair orientation (stored in
/// random direction) and random metric categories.
pub fn small_world() -> impl Strategy<Value = SmallWorld> {
    (2usize..=4).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let m = pairs.len();
        (
            Just(n),
            Just(pairs),
            prop::collection::vec(any_relation(), m),
            prop::collection::vec((any_compass(), any::<bool>()), m),
            prop::collection::vec((any_category(), any::<bool>()), m),
            prop::collection::vec(prop::option::of(any_category()), n),
        )
            .prop_map(|(n, pairs, rels, dirs, cats, selfs)| {
                let orient = |((i, j), (d, flip)): ((usize, usize), (Direction, bool))| {
                    // `same` only between distinct objects is fine, but keep it rare
                    if flip {
                        (j, i, d)
                    } else {
                        (i, j, d)
                    }
                };
                SmallWorld {
                    n,
                    relations: pairs
                        .iter()
                        .zip(&rels)
                        .map(|(&(i, j), &r)| (i, j, r))
                        .collect(),
                    orientations: pairs.iter().copied().zip(dirs).map(orient).collect(),
                    metrics: pairs
                        .iter()
                        .zip(&cats)
                        .map(|(&(i, j), &(c, f))| if f { (j, i, c) } else { (i, j, c) })
                        .collect(),
                    self_metrics: selfs
                        .iter()
                        .enumerate()
                        .filter_map(|(i, c)| c.map(|c| (i, c)))
                        .collect(),
                }
            })
    })
}

/// An ordered pair of distinct object indices below `n`.
pub fn ordered_pair(n: usize) -> impl Strategy<Value = (usize, usize)> + Clone {
    (0..n, 0..n - 1).prop_map(|(i, k)| if k >= i { (i, k + 1) } else { (i, k) })
}

pub mod oracle {
    //! Straight-line reimplementation of the distance formulas with its own
    //! graph tables. Must not call into the library's graph or similarity code.
    use super::*;

    const TOPO: [&str; 8] = [
        "disjoint",
        "meet",
        "overlap",
        "equal",
        "covers",
        "coveredBy",
        "contains",
        "inside",
    ];
    const GROUP: [u8; 8] = [1, 2, 2, 3, 3, 3, 3, 3];
    const ADJ: [(usize, usize); 9] = [
        (0, 1),
        (1, 2),
        (2, 4),
        (2, 5),
        (2, 3),
        (4, 6),
        (5, 7),
        (3, 4),
        (3, 5),
    ];

    /// Floyd-Warshall over the hand-written polygon network.
    pub fn topo_cost(a: &str, b: &str) -> u64 {
        const INF: u64 = u64::MAX / 4;
        let mut d = [[INF; 8]; 8];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = 0;
        }
        for &(i, j) in &ADJ {
            let w = if GROUP[i] == GROUP[j] { 2 } else { 3 };
            d[i][j] = w;
            d[j][i] = w;
        }
        for k in 0..8 {
            for i in 0..8 {
                for j in 0..8 {
                    if d[i][k] + d[k][j] < d[i][j] {
                        d[i][j] = d[i][k] + d[k][j];
                    }
                }
            }
        }
        let ia = TOPO.iter().position(|x| *x == a).unwrap();
        let ib = TOPO.iter().position(|x| *x == b).unwrap();
        d[ia][ib]
    }

    /// Closed form on the compass ring (2 per step) with the `same` hub
    /// (2 per spoke).
    pub fn direction_cost(a: &str, b: &str) -> u64 {
        const RING: [&str; 8] = [
            "north",
            "northeast",
            "east",
            "southeast",
            "south",
            "southwest",
            "west",
            "northwest",
        ];
        if a == b {
            return 0;
        }
        match (
            RING.iter().position(|x| *x == a),
            RING.iter().position(|x| *x == b),
        ) {
            (Some(i), Some(j)) => {
                let k = (i as i64 - j as i64).unsigned_abs();
                let ring = 2 * k.min(8 - k);
                ring.min(4)
            }
            _ => 2,
        }
    }

    pub fn metric_ordinal(c: &str) -> u64 {
        match c {
            "equal" => 0,
            "near" => 1,
            "medium" => 2,
            "far" => 3,
            other => panic!("{other}"),
        }
    }

    /// `(topological, directional, metric, total, similarity)` for two
    /// single-scene queries over `world`.
    pub fn single_scene_distance(
        world: &SmallWorld,
        a: (usize, usize),
        b: (usize, usize),
    ) -> (u64, u64, u64, u64, f64) {
        let rel = |i: usize, j: usize| -> String {
            for &(x, y, r) in &world.relations {
                if (x, y) == (i, j) {
                    return r.to_string();
                }
                if (y, x) == (i, j) {
                    return r.converse().to_string();
                }
            }
            unreachable!()
        };
        let orient = |i: usize, j: usize| -> String {
            for &(x, y, d) in &world.orientations {
                if (x, y) == (i, j) {
                    return d.to_string();
                }
                if (y, x) == (i, j) {
                    return d.opposite().to_string();
                }
            }
            unreachable!()
        };
        let cat = |i: usize, j: usize| -> String {
            if i == j {
                return world
                    .self_metrics
                    .iter()
                    .find(|(x, _)| *x == i)
                    .map_or("equal".to_string(), |(_, c)| c.to_string());
            }
            world
                .metrics
                .iter()
                .find(|&&(x, y, _)| (x, y) == (i, j) || (y, x) == (i, j))
                .map(|(_, _, c)| c.to_string())
                .unwrap()
        };
        let topo = topo_cost(&rel(a.0, a.1), &rel(b.0, b.1));
        let dir = direction_cost(&orient(a.0, a.1), &orient(b.0, b.1));
        let mut met = 0;
        for i in [a.0, a.1] {
            for j in [b.0, b.1] {
                met += metric_ordinal(&cat(i, j));
            }
        }
        let total = topo + dir + met;
        (topo, dir, met, total, 1.0 / (1.0 + total as f64))
    }

    /// Exhaustive relaxation: repeat `d[i][j] = min(d[i][j], d[i][k] + w(k, j))`
    /// over every edge until nothing changes.
    pub fn all_pairs_by_relaxation(
        nodes: &[String],
        edges: &[(String, String, u32)],
    ) -> Vec<Vec<u64>> {
        const INF: u64 = u64::MAX / 4;
        let n = nodes.len();
        let idx = |l: &str| nodes.iter().position(|x| x == l).unwrap();
        let mut d = vec![vec![INF; n]; n];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = 0;
        }
        loop {
            let mut changed = false;
            for (a, b, w) in edges {
                let (ia, ib, w) = (idx(a), idx(b), *w as u64);
                for row in d.iter_mut() {
                    if row[ia] + w < row[ib] {
                        row[ib] = row[ia] + w;
                        changed = true;
                    }
                    if row[ib] + w < row[ia] {
                        row[ia] = row[ib] + w;
                        changed = true;
                    }
                }
            }
            if !changed {
                return d;
            }
        }
    }
}
