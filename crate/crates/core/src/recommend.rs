//! Session query log and successor-based recommendation.
//!
//! Every logged query that has a successor in its session is compared with
//! the current query. The successor inherits the similarity as score;
//! successors with the same (whitespace-normalized) text accumulate the
//! similarities of all their predecessors.
//!
//! Log format:
//!
//! ```text
//! session: s1          (optional, defaults to s<n>)
//! id: q1
//! SELECT ...
//! ---
//! id: q2
//! SELECT ...
//! ===
//! id: q3
//! ...
//! ```

use std::collections::{HashMap, HashSet};

use num_rational::{BigRational, Ratio};
use num_traits::Zero;
use thiserror::Error;

use crate::context::SpatialContext;
use crate::graph::GraphRegistry;
use crate::mdx::{extract_scenes, parse_query, ParseError, QueryAst, SceneError};
use crate::scene::SceneSet;
use crate::similarity::{spatial_distance, to_big, SimilarityError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogError {
    #[error("line {line}: expected `id: <query-id>`")]
    MissingId { line: usize },
    #[error("line {line}: session `{session}` has no queries")]
    EmptySession { line: usize, session: String },
    #[error("line {line}: duplicate query id `{id}`")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: duplicate session id `{id}`")]
    DuplicateSession { line: usize, id: String },
    #[error("query `{id}`: {source}")]
    Query { id: String, source: ParseError },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecommendError {
    #[error("k must be positive")]
    ZeroK,
    #[error("current query: {0}")]
    Parse(#[from] ParseError),
    #[error("current query: {0}")]
    Scenes(#[from] SceneError),
    #[error("logged query `{id}`: {source}")]
    LoggedScenes { id: String, source: SceneError },
    #[error("logged query `{id}`: {source}")]
    Similarity { id: String, source: SimilarityError },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoggedQuery {
    pub id: String,
    pub mdx: String,
    pub ast: QueryAst,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Session {
    pub id: String,
    pub queries: Vec<LoggedQuery>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QueryLog {
    pub sessions: Vec<Session>,
}

fn normalize_text(mdx: &str) -> String {
    mdx.split_whitespace().collect::<Vec<_>>().join(" ")
}

impl QueryLog {
    pub fn parse(source: &str) -> Result<Self, LogError> {
        let mut log = QueryLog::default();
        let mut query_ids = HashSet::new();
        let mut session_ids = HashSet::new();
        let lines: Vec<(usize, &str)> = source
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .collect();

        for session_block in lines.split(|(_, l)| l.trim_end() == "===") {
            if session_block.iter().all(|(_, l)| l.trim().is_empty()) {
                continue;
            }
            let first_line = session_block.first().map_or(0, |(n, _)| *n);
            let mut blocks = session_block
                .split(|(_, l)| l.trim_end() == "---")
                .peekable();
            let mut session_id = None;
            let mut queries = Vec::new();

            // an optional `session:` header precedes the first query
            if let Some(first) = blocks.peek_mut() {
                let skip = first
                    .iter()
                    .take_while(|(_, l)| l.trim().is_empty())
                    .count();
                if let Some((n, l)) = first.get(skip) {
                    if let Some(id) = l.trim().strip_prefix("session:") {
                        let id = id.trim().to_string();
                        if !session_ids.insert(id.clone()) {
                            return Err(LogError::DuplicateSession { line: *n, id });
                        }
                        session_id = Some((id, *n));
                        *first = &first[skip + 1..];
                    }
                }
            }

            for (bi, block) in blocks.enumerate() {
                let body: Vec<&(usize, &str)> = block
                    .iter()
                    .skip_while(|(_, l)| l.trim().is_empty())
                    .collect();
                let Some(&&(id_line, header)) = body.first() else {
                    if bi == 0 && session_id.is_some() {
                        continue;
                    }
                    let line = block.first().map_or(first_line, |(n, _)| *n);
                    return Err(LogError::MissingId { line });
                };
                let id = header
                    .trim()
                    .strip_prefix("id:")
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .ok_or(LogError::MissingId { line: id_line })?;
                if !query_ids.insert(id.clone()) {
                    return Err(LogError::DuplicateId { line: id_line, id });
                }
                let mdx = body[1..]
                    .iter()
                    .map(|(_, l)| *l)
                    .collect::<Vec<_>>()
                    .join("\n")
                    .trim()
                    .to_string();
                let ast = parse_query(&mdx).map_err(|source| LogError::Query {
                    id: id.clone(),
                    source,
                })?;
                queries.push(LoggedQuery { id, mdx, ast });
            }

            match (session_id, queries.is_empty()) {
                (Some((id, line)), true) => {
                    return Err(LogError::EmptySession { line, session: id })
                }
                (None, true) => continue,
                (Some((id, _)), false) => log.sessions.push(Session { id, queries }),
                (None, false) => {
                    let mut n = log.sessions.len() + 1;
                    while session_ids.contains(&format!("s{n}")) {
                        n += 1;
                    }
                    let id = format!("s{n}");
                    session_ids.insert(id.clone());
                    log.sessions.push(Session { id, queries });
                }
            }
        }
        Ok(log)
    }

    pub fn queries(&self) -> impl Iterator<Item = &LoggedQuery> {
        self.sessions.iter().flat_map(|s| s.queries.iter())
    }

    pub fn get(&self, id: &str) -> Option<&LoggedQuery> {
        self.queries().find(|q| q.id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recommendation {
    pub query_id: String,
    pub mdx: String,
    pub score: BigRational,
    /// `(predecessor query id, similarity to the current query)`.
    pub provenance: Vec<(String, Ratio<u64>)>,
}

struct Candidate {
    order: (usize, usize),
    rec: Recommendation,
}

pub fn recommend(
    log: &QueryLog,
    current: &str,
    ctx: &SpatialContext,
    graphs: &GraphRegistry,
    k: usize,
) -> Result<Vec<Recommendation>, RecommendError> {
    if k == 0 {
        return Err(RecommendError::ZeroK);
    }
    let current_ast = parse_query(current)?;
    let current_scenes = extract_scenes(&current_ast, ctx)?;
    let current_text = normalize_text(current);

    let mut scene_cache: HashMap<&str, SceneSet> = HashMap::new();
    let mut candidates: Vec<Candidate> = Vec::new();
    let mut by_text: HashMap<String, usize> = HashMap::new();

    for (si, session) in log.sessions.iter().enumerate() {
        for (pi, pair) in session.queries.windows(2).enumerate() {
            let (pred, succ) = (&pair[0], &pair[1]);
            let text = normalize_text(&succ.mdx);
            if text == current_text {
                continue;
            }
            if !scene_cache.contains_key(pred.id.as_str()) {
                let scenes = extract_scenes(&pred.ast, ctx).map_err(|source| {
                    RecommendError::LoggedScenes {
                        id: pred.id.clone(),
                        source,
                    }
                })?;
                scene_cache.insert(&pred.id, scenes);
            }
            let sim =
                spatial_distance(&current_scenes, &scene_cache[pred.id.as_str()], ctx, graphs)
                    .map_err(|source| RecommendError::Similarity {
                        id: pred.id.clone(),
                        source,
                    })?
                    .similarity;

            let idx = *by_text.entry(text).or_insert_with(|| {
                candidates.push(Candidate {
                    order: (si, pi + 1),
                    rec: Recommendation {
                        query_id: succ.id.clone(),
                        mdx: succ.mdx.clone(),
                        score: BigRational::zero(),
                        provenance: Vec::new(),
                    },
                });
                candidates.len() - 1
            });
            let rec = &mut candidates[idx].rec;
            rec.score += to_big(sim);
            rec.provenance.push((pred.id.clone(), sim));
        }
    }

    candidates.sort_by(|a, b| {
        b.rec
            .score
            .cmp(&a.rec.score)
            .then(a.order.cmp(&b.order))
            .then_with(|| a.rec.query_id.cmp(&b.rec.query_id))
    });
    Ok(candidates.into_iter().take(k).map(|c| c.rec).collect())
}
