mod common;

use std::fs;

use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

use common::{example_context, fixture, ordered_pair, read_fixture, small_world, OBJECTS};
use solap_sim::eval::spearman;
use solap_sim::graph::GraphFamily;
use solap_sim::recommend::{recommend, QueryLog};
use solap_sim::{
    extract_references, extract_scenes, mtc, parse_query, CubeSchema, GraphRegistry,
    NeighborhoodGraph, SpatialContext,
};

fn config(seed: u64) -> ProptestConfig {
    ProptestConfig {
        cases: 1000,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn compact(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

#[test]
fn every_fixture_query_parses() {
    let mut seen = 0;
    for dir in ["example", "eval", "cli"] {
        for entry in fs::read_dir(fixture(dir)).unwrap() {
            let path = entry.unwrap().path();
            if path.extension().is_some_and(|e| e == "mdx") {
                let text = fs::read_to_string(&path).unwrap();
                parse_query(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
                seen += 1;
            }
        }
    }
    assert!(seen >= 10);
}

#[test]
fn default_graph_costs_are_a_metric() {
    let registry = GraphRegistry::default();
    for g in registry.iter() {
        let nodes = g.nodes();
        for a in nodes {
            assert_eq!(mtc(g, a, a).unwrap(), 0);
            for b in nodes {
                let ab = mtc(g, a, b).unwrap();
                assert_eq!(ab, mtc(g, b, a).unwrap());
                assert_eq!(ab == 0, a == b, "{}: {a} {b}", g.family());
                for c in nodes {
                    assert!(ab <= mtc(g, a, c).unwrap() + mtc(g, c, b).unwrap());
                }
            }
        }
    }
}

#[test]
fn north_to_south_goes_through_the_hub() {
    let registry = GraphRegistry::default();
    assert_eq!(mtc(registry.direction(), "north", "south").unwrap(), 4);
    assert_eq!(mtc(registry.direction(), "east", "west").unwrap(), 4);
    assert_eq!(mtc(registry.direction(), "north", "east").unwrap(), 4);
    assert_eq!(mtc(registry.direction(), "same", "southwest").unwrap(), 2);
    assert_eq!(registry.get(GraphFamily::Direction).nodes().len(), 9);
}

const METRIC: [&str; 4] = ["equal", "near", "medium", "far"];

fn metric_graph() -> impl Strategy<Value = Vec<(usize, usize, u32)>> {
    let chain = prop::collection::vec(1u32..10, 3);
    let extra = prop::collection::vec((0usize..4, 0usize..4, 1u32..10), 0..4);
    (chain, extra).prop_map(|(chain, extra)| {
        let mut edges: Vec<(usize, usize, u32)> = chain
            .iter()
            .enumerate()
            .map(|(i, &w)| (i, i + 1, w))
            .collect();
        for (a, b, w) in extra {
            let (a, b) = (a.min(b), a.max(b));
            if a != b && !edges.iter().any(|&(x, y, _)| (x, y) == (a, b)) {
                edges.push((a, b, w));
            }
        }
        edges
    })
}

proptest! {
    #![proptest_config(config(11))]

    #[test]
    fn parser_never_panics(src in "[ -~\n]{0,80}") {
        let _ = parse_query(&src);
    }

    #[test]
    fn parser_never_panics_on_mdx_shaped_input(
        parts in prop::collection::vec(prop::sample::select(vec![
            "SELECT", "FROM", "WHERE", "ON", "COLUMNS", "ROWS", "AND", "{", "}", "(", ")", ",", ".",
            "[Zone1]", "[Measures]", "[Quantity]", "meet", "intersect", "[", "]",
        ]), 0..20)
    ) {
        let _ = parse_query(&parts.join(" "));
    }

    #[test]
    fn custom_graph_costs_obey_metric_laws(edges in metric_graph()) {
        let nodes: Vec<String> = METRIC.iter().map(|s| s.to_string()).collect();
        let named = edges.iter().map(|&(a, b, w)| (METRIC[a].to_string(), METRIC[b].to_string(), w)).collect();
        let g = NeighborhoodGraph::new(GraphFamily::Metric, nodes, named).unwrap();
        for a in METRIC {
            prop_assert_eq!(mtc(&g, a, a).unwrap(), 0);
            for b in METRIC {
                let ab = mtc(&g, a, b).unwrap();
                prop_assert_eq!(ab, mtc(&g, b, a).unwrap());
                if let Some(w) = g.edge_weight(a, b) {
                    prop_assert!(ab <= w);
                }
                for c in METRIC {
                    prop_assert!(ab <= mtc(&g, a, c).unwrap() + mtc(&g, c, b).unwrap());
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(config(12))]

    #[test]
    fn context_source_round_trips(w in small_world()) {
        let ctx = w.context();
        let again = SpatialContext::parse(&ctx.to_source()).unwrap();
        prop_assert_eq!(&again, &ctx);
        prop_assert_eq!(again.to_source(), ctx.to_source());
    }

    #[test]
    fn derived_facts_are_converse_consistent(w in small_world()) {
        let ctx = w.context();
        for a in &OBJECTS[..w.n] {
            for b in &OBJECTS[..w.n] {
                if a == b {
                    continue;
                }
                let ab = ctx.relation_of(a, b).unwrap().unwrap();
                prop_assert_eq!(ctx.relation_of(b, a).unwrap().unwrap(), ab.converse());
                prop_assert_eq!(ctx.orientation_of(b, a).unwrap(), ctx.orientation_of(a, b).unwrap().opposite());
                prop_assert_eq!(ctx.metric_category_of(b, a).unwrap(), ctx.metric_category_of(a, b).unwrap());
            }
        }
    }

    #[test]
    fn scenes_ignore_member_order_and_repeat(
        (w, picks, rotate) in small_world().prop_flat_map(|w| {
            let n = w.n;
            (Just(w), prop::sample::subsequence((0..n).collect::<Vec<_>>(), 2..=n), 0usize..4)
        })
    ) {
        let ctx = w.context();
        let query = |ids: &[usize]| {
            let members: Vec<String> = ids.iter().map(|&i| format!("[{}]", OBJECTS[i])).collect();
            format!("SELECT {{[m]}} ON COLUMNS FROM [Cube] WHERE {{{}}}", members.join(", "))
        };
        let mut rotated = picks.clone();
        let len = rotated.len();
        rotated.rotate_left(rotate % len);
        rotated.reverse();
        let a = extract_scenes(&parse_query(&query(&picks)).unwrap(), &ctx).unwrap();
        let b = extract_scenes(&parse_query(&query(&rotated)).unwrap(), &ctx).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.len(), len * (len - 1) / 2);
        let again = extract_scenes(&parse_query(&query(&picks)).unwrap(), &ctx).unwrap();
        prop_assert_eq!(a, again);
    }

    #[test]
    fn scene_extraction_of_explicit_operators_matches_the_context(
        (w, (i, j)) in small_world().prop_flat_map(|w| { let n = w.n; (Just(w), ordered_pair(n)) })
    ) {
        let ctx = w.context();
        let scene = w.scene(i, j);
        let text = format!(
            "SELECT {{[m]}} ON COLUMNS FROM [Cube] WHERE {{[{}] {} [{}]}}",
            scene.object_a, scene.relation, scene.object_b
        );
        let got = extract_scenes(&parse_query(&text).unwrap(), &ctx).unwrap();
        prop_assert_eq!(got.scenes(), &[scene][..]);
    }
}

const SLICER_MEMBERS: [&str; 7] = [
    "[Product].[All Products].[Biological]",
    "[Product].[All Products].[NoBiological]",
    "[Time].[All Time].[2012]",
    "[Time].[All Time].[2013]",
    "[Region].[All Region].[Region1].[Zone1]",
    "[Zone 2]",
    "[Zone3]",
];

proptest! {
    #![proptest_config(config(13))]

    #[test]
    fn references_ignore_order_spacing_and_repetition(
        picks in prop::sample::subsequence((0..SLICER_MEMBERS.len()).collect::<Vec<_>>(), 1..=SLICER_MEMBERS.len()),
        shuffle in any::<prop::sample::Index>(),
        pad in " {0,3}",
    ) {
        let schema = CubeSchema::parse(&read_fixture("example/production.schema")).unwrap();
        let query = |ids: &[usize], sep: &str| {
            let members: Vec<&str> = ids.iter().map(|&i| SLICER_MEMBERS[i]).collect();
            format!("SELECT {{[Measures].[Quantity]}} ON COLUMNS FROM [Production] WHERE {{{}}}", members.join(sep))
        };
        let mut other = picks.clone();
        other.rotate_left(shuffle.index(picks.len()));
        other.reverse();
        let mut doubled = picks.clone();
        doubled.extend(&picks);

        let base = extract_references(&parse_query(&query(&picks, ", ")).unwrap(), &schema).unwrap();
        let sep = format!("{pad},{pad}");
        for ids in [&other, &doubled] {
            let refs = extract_references(&parse_query(&query(ids, &sep)).unwrap(), &schema).unwrap();
            prop_assert_eq!(&refs, &base);
        }
        let twice = extract_references(&parse_query(&query(&picks, ", ")).unwrap(), &schema).unwrap();
        prop_assert_eq!(&twice, &base);
        // each dimension contributes at least one member
        prop_assert!(base.members.len() >= schema.dimensions.len());
        prop_assert_eq!(base.measures.iter().collect::<Vec<_>>(), vec!["Quantity"]);
    }
}

fn finite_scores() -> impl Strategy<Value = (Vec<i32>, Vec<i32>)> {
    (2usize..30).prop_flat_map(|n| {
        (
            prop::collection::vec(-20i32..20, n),
            prop::collection::vec(-20i32..20, n),
        )
    })
}

fn varies(v: &[i32]) -> bool {
    v.iter().any(|x| *x != v[0])
}

proptest! {
    #![proptest_config(config(14))]

    #[test]
    fn spearman_is_symmetric_and_bounded((x, y) in finite_scores()) {
        prop_assume!(varies(&x) && varies(&y));
        let r = spearman(&x, &y).unwrap();
        prop_assert!((-1.0..=1.0).contains(&r));
        prop_assert_eq!(r, spearman(&y, &x).unwrap());
        prop_assert_eq!(spearman(&x, &x).unwrap(), 1.0);
        let neg: Vec<i32> = x.iter().map(|v| -v).collect();
        prop_assert_eq!(spearman(&x, &neg).unwrap(), -1.0);
    }

    #[test]
    fn spearman_ignores_increasing_transforms((x, y) in finite_scores()) {
        prop_assume!(varies(&x) && varies(&y));
        let r = spearman(&x, &y).unwrap();
        let cubed: Vec<i64> = x.iter().map(|&v| (v as i64).pow(3) + 7).collect();
        let scaled: Vec<f64> = y.iter().map(|&v| (v as f64).exp()).collect();
        prop_assert_eq!(spearman(&cubed, &scaled).unwrap(), r);
    }

    #[test]
    fn spearman_rejects_constant_input(n in 2usize..20, c in any::<i32>(), y in prop::collection::vec(any::<i32>(), 20)) {
        prop_assert!(spearman(&vec![c; n], &y[..n]).is_err());
    }
}

/// Query texts over the example context, all of which yield scenes.
fn pool() -> Vec<String> {
    let mut texts: Vec<String> = [
        "example/q1.mdx",
        "example/q2.mdx",
        "example/q3.mdx",
        "eval/q4.mdx",
        "eval/q5.mdx",
        "cli/three_zones.mdx",
    ]
    .iter()
    .map(|f| read_fixture(f))
    .collect();
    texts.push(read_fixture("example/q1.mdx").replace("NoBiological", "Biological"));
    texts.push(read_fixture("example/q3.mdx").replace("Biological", "NoBiological"));
    texts
}

fn render_log(pool: &[String], sessions: &[Vec<usize>]) -> String {
    sessions
        .iter()
        .enumerate()
        .map(|(s, qs)| {
            qs.iter()
                .enumerate()
                .map(|(p, &q)| format!("id: s{s}q{p}\n{}", pool[q].trim_end()))
                .collect::<Vec<_>>()
                .join("\n---\n")
        })
        .collect::<Vec<_>>()
        .join("\n===\n")
}

fn sessions() -> impl Strategy<Value = Vec<Vec<usize>>> {
    prop::collection::vec(prop::collection::vec(0usize..8, 1..5), 1..4)
}

proptest! {
    #![proptest_config(config(15))]

    #[test]
    fn recommendations_are_bounded_sorted_and_deterministic(
        log in sessions(), current in 0usize..8, k in 1usize..6
    ) {
        let pool = pool();
        let parsed = QueryLog::parse(&render_log(&pool, &log)).unwrap();
        let (ctx, graphs) = (example_context(), GraphRegistry::default());
        let recs = recommend(&parsed, &pool[current], &ctx, &graphs, k).unwrap();
        prop_assert!(recs.len() <= k);
        for pair in recs.windows(2) {
            prop_assert!(pair[0].score >= pair[1].score);
        }
        for r in &recs {
            prop_assert!(r.score > BigRational::zero());
            prop_assert_ne!(compact(&r.mdx), compact(&pool[current]));
        }
        let texts: Vec<String> = recs.iter().map(|r| compact(&r.mdx)).collect();
        let mut unique = texts.clone();
        unique.sort();
        unique.dedup();
        prop_assert_eq!(unique.len(), texts.len());
        prop_assert_eq!(recommend(&parsed, &pool[current], &ctx, &graphs, k).unwrap(), recs);
    }

    #[test]
    fn more_evidence_never_lowers_a_score(
        log in sessions(), current in 0usize..8, pred in 0usize..8, succ in 0usize..8
    ) {
        let pool = pool();
        prop_assume!(compact(&pool[succ]) != compact(&pool[current]));
        let (ctx, graphs) = (example_context(), GraphRegistry::default());
        let score_of = |sessions: &[Vec<usize>]| {
            let parsed = QueryLog::parse(&render_log(&pool, sessions)).unwrap();
            recommend(&parsed, &pool[current], &ctx, &graphs, 100)
                .unwrap()
                .into_iter()
                .find(|r| compact(&r.mdx) == compact(&pool[succ]))
                .map(|r| r.score)
                .unwrap_or_else(BigRational::zero)
        };
        let before = score_of(&log);
        let mut extended = log.clone();
        extended.push(vec![pred, succ]);
        let after = score_of(&extended);
        prop_assert!(after > before, "{} -> {}", before, after);
    }
}
