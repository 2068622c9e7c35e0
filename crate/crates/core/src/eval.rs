//! Rank correlation between system similarity and human judgments.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io;
use std::path::Path;

use num_rational::Ratio;
use thiserror::Error;

use crate::context::SpatialContext;
use crate::graph::GraphRegistry;
use crate::mdx::{extract_scenes, parse_query, ParseError, SceneError};
use crate::records::records;
use crate::similarity::{spatial_distance, SimilarityError};

pub const MAX_HUMAN_SCORE: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpearmanError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least 2 observations, got {0}")]
    TooFew(usize),
    #[error("{0} scores have zero variance")]
    ZeroVariance(&'static str),
    #[error("{0} scores are not comparable (NaN)")]
    Incomparable(&'static str),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("line {line}: expected `<pair-id> <query-a> <query-b> <score>`")]
    Malformed { line: usize },
    #[error("line {line}: score {score} outside [0, 4]")]
    ScoreOutOfRange { line: usize, score: f64 },
    #[error("line {line}: duplicate pair id `{pair}`")]
    DuplicatePair { line: usize, pair: String },
    #[error("pair `{pair}`: unknown query `{query}`")]
    UnknownQuery { pair: String, query: String },
    #[error("pair `{pair}`: query `{query}`: {source}")]
    Parse {
        pair: String,
        query: String,
        source: ParseError,
    },
    #[error("pair `{pair}`: query `{query}`: {source}")]
    Scenes {
        pair: String,
        query: String,
        source: SceneError,
    },
    #[error("pair `{pair}`: {source}")]
    Similarity {
        pair: String,
        source: SimilarityError,
    },
    #[error(transparent)]
    Spearman(#[from] SpearmanError),
}

/// Average ranks (1-based); tied values share the mean of their positions.
pub fn average_ranks<T: PartialOrd>(values: &[T]) -> Option<Vec<f64>> {
    if values.iter().any(|v| v.partial_cmp(v).is_none()) {
        return None;
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(Ordering::Equal));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // positions i..=j hold ranks i+1..=j+1
        let avg = (i + j + 2) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    Some(ranks)
}

/// Spearman's rho: Pearson correlation of average ranks.
pub fn spearman<X: PartialOrd, Y: PartialOrd>(xs: &[X], ys: &[Y]) -> Result<f64, SpearmanError> {
    if xs.len() != ys.len() {
        return Err(SpearmanError::LengthMismatch(xs.len(), ys.len()));
    }
    if xs.len() < 2 {
        return Err(SpearmanError::TooFew(xs.len()));
    }
    let rx = average_ranks(xs).ok_or(SpearmanError::Incomparable("first"))?;
    let ry = average_ranks(ys).ok_or(SpearmanError::Incomparable("second"))?;
    pearson_of_ranks(&rx, &ry)
}

fn pearson_of_ranks(rx: &[f64], ry: &[f64]) -> Result<f64, SpearmanError> {
    // doubled ranks are integers, so the sums are exact
    let n = rx.len() as i128;
    let dx: Vec<i128> = rx.iter().map(|r| (r * 2.0) as i128).collect();
    let dy: Vec<i128> = ry.iter().map(|r| (r * 2.0) as i128).collect();
    let (sx, sy): (i128, i128) = (dx.iter().sum(), dy.iter().sum());
    let sxy: i128 = dx.iter().zip(&dy).map(|(a, b)| a * b).sum();
    let sxx: i128 = dx.iter().map(|a| a * a).sum();
    let syy: i128 = dy.iter().map(|b| b * b).sum();
    let cov = n * sxy - sx * sy;
    let vx = n * sxx - sx * sx;
    let vy = n * syy - sy * sy;
    if vx == 0 {
        return Err(SpearmanError::ZeroVariance("first"));
    }
    if vy == 0 {
        return Err(SpearmanError::ZeroVariance("second"));
    }
    let rho = if vx == vy {
        cov as f64 / vx as f64
    } else {
        cov as f64 / ((vx as f64) * (vy as f64)).sqrt()
    };
    Ok(rho.clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Judgment {
    pub pair_id: String,
    pub query_a: String,
    pub query_b: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct JudgmentSet {
    pub rows: Vec<Judgment>,
}

impl JudgmentSet {
    pub fn parse(source: &str) -> Result<Self, EvalError> {
        let mut rows = Vec::new();
        let mut seen = HashSet::new();
        for rec in records(source) {
            let line = rec.line;
            let [pair, a, b, score] = rec.fields[..] else {
                return Err(EvalError::Malformed { line });
            };
            let score: f64 = score.parse().map_err(|_| EvalError::Malformed { line })?;
            if !(0.0..=MAX_HUMAN_SCORE).contains(&score) {
                return Err(EvalError::ScoreOutOfRange { line, score });
            }
            if !seen.insert(pair.to_string()) {
                return Err(EvalError::DuplicatePair {
                    line,
                    pair: pair.to_string(),
                });
            }
            rows.push(Judgment {
                pair_id: pair.into(),
                query_a: a.into(),
                query_b: b.into(),
                score,
            });
        }
        Ok(JudgmentSet { rows })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalRow {
    pub pair_id: String,
    pub query_a: String,
    pub query_b: String,
    pub human: f64,
    pub system: Ratio<u64>,
    pub human_rank: f64,
    pub system_rank: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub n: usize,
    pub rho: f64,
    pub rows: Vec<EvalRow>,
}

/// Reads every `<query-id>.mdx` file in `dir`.
pub fn queries_from_dir(dir: &Path) -> io::Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.extension().and_then(|e| e.to_str()) == Some("mdx") {
            if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                out.insert(stem.to_string(), fs::read_to_string(&path)?);
            }
        }
    }
    Ok(out)
}

pub fn evaluate(
    judgments: &JudgmentSet,
    queries: &BTreeMap<String, String>,
    ctx: &SpatialContext,
    graphs: &GraphRegistry,
) -> Result<EvalReport, EvalError> {
    let scenes_of = |pair: &str, id: &str| {
        let text = queries.get(id).ok_or_else(|| EvalError::UnknownQuery {
            pair: pair.into(),
            query: id.into(),
        })?;
        let ast = parse_query(text).map_err(|source| EvalError::Parse {
            pair: pair.into(),
            query: id.into(),
            source,
        })?;
        extract_scenes(&ast, ctx).map_err(|source| EvalError::Scenes {
            pair: pair.into(),
            query: id.into(),
            source,
        })
    };

    let mut sorted: Vec<&Judgment> = judgments.rows.iter().collect();
    sorted.sort_by(|a, b| a.pair_id.cmp(&b.pair_id));

    let mut system = Vec::with_capacity(sorted.len());
    for j in &sorted {
        let a = scenes_of(&j.pair_id, &j.query_a)?;
        let b = scenes_of(&j.pair_id, &j.query_b)?;
        let d = spatial_distance(&a, &b, ctx, graphs).map_err(|source| EvalError::Similarity {
            pair: j.pair_id.clone(),
            source,
        })?;
        system.push(d.similarity);
    }
    let human: Vec<f64> = sorted.iter().map(|j| j.score).collect();
    let rho = spearman(&human, &system)?;
    let hr = average_ranks(&human).unwrap_or_default();
    let sr = average_ranks(&system).unwrap_or_default();
    let rows = sorted
        .iter()
        .enumerate()
        .map(|(i, j)| EvalRow {
            pair_id: j.pair_id.clone(),
            query_a: j.query_a.clone(),
            query_b: j.query_b.clone(),
            human: j.score,
            system: system[i],
            human_rank: hr[i],
            system_rank: sr[i],
        })
        .collect();
    Ok(EvalReport {
        n: sorted.len(),
        rho,
        rows,
    })
}
