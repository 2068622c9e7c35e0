//! Command-line front end. `run` is the whole program minus process exit,
//! so it can be driven from tests.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use crate::context::SpatialContext;
use crate::decimal::{format_f64, format_rational};
use crate::eval::{evaluate, queries_from_dir, JudgmentSet};
use crate::graph::{mtc, GraphFamily, GraphRegistry};
use crate::mdx::{extract_references, extract_scenes_with, parse_query, QueryAst, SceneOptions};
use crate::recommend::{recommend, QueryLog};
use crate::scene::SceneSet;
use crate::schema::CubeSchema;
use crate::similarity::{format_similarity, spatial_distance_with, Aggregation, SimilarityOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "solap-sim",
    version,
    about = "Spatial similarity and recommendation for MDX queries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AggregationArg {
    Sum,
    MinAssignment,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the members and measures a query references
    Refs {
        #[arg(long)]
        schema: PathBuf,
        query: PathBuf,
    },
    /// Print the spatial scenes a query invokes
    Scenes {
        #[arg(long)]
        context: PathBuf,
        /// Let a lone member without completion entries yield no scene
        #[arg(long)]
        allow_incomplete: bool,
        query: PathBuf,
    },
    /// Print the spatial distance breakdown and similarity of two queries
    Sim {
        #[arg(long)]
        context: PathBuf,
        /// Graph configuration overriding the default graphs
        #[arg(long)]
        graphs: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "sum")]
        aggregation: AggregationArg,
        a: PathBuf,
        b: PathBuf,
    },
    /// Recommend next queries from a session log
    Recommend {
        #[arg(long)]
        context: PathBuf,
        #[arg(long)]
        graphs: Option<PathBuf>,
        #[arg(long)]
        log: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        query: PathBuf,
    },
    /// Spearman correlation between human judgments and system similarity
    Eval {
        #[arg(long)]
        context: PathBuf,
        #[arg(long)]
        graphs: Option<PathBuf>,
        /// Directory of <query-id>.mdx files, or a session log file
        #[arg(long)]
        queries: PathBuf,
        #[arg(long)]
        judgments: PathBuf,
    },
    /// Print the minimum transformation cost between two labels
    GraphMtc {
        #[arg(long)]
        family: String,
        #[arg(long)]
        graphs: Option<PathBuf>,
        from: String,
        to: String,
    },
}

struct CliError {
    category: &'static str,
    detail: String,
}

fn fail(category: &'static str, e: impl Display) -> CliError {
    CliError {
        category,
        detail: e.to_string(),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError {
        category: "io",
        detail: format!("{}: {e}", path.display()),
    })
}

fn load_context(path: &Path) -> Result<SpatialContext, CliError> {
    SpatialContext::parse(&read(path)?).map_err(|e| fail("context", e))
}

fn load_graphs(path: Option<&Path>) -> Result<GraphRegistry, CliError> {
    match path {
        None => Ok(GraphRegistry::default()),
        Some(p) => GraphRegistry::with_overrides(&read(p)?).map_err(|e| fail("graph", e)),
    }
}

fn load_query(path: &Path) -> Result<(String, QueryAst), CliError> {
    let text = read(path)?;
    let ast = parse_query(&text).map_err(|e| CliError {
        category: "parse",
        detail: format!("{}: {e}", path.display()),
    })?;
    Ok((text, ast))
}

fn scenes(ast: &QueryAst, ctx: &SpatialContext, opts: &SceneOptions) -> Result<SceneSet, CliError> {
    extract_scenes_with(ast, ctx, opts).map_err(|e| fail("scenes", e))
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    let mut lines: Vec<String> = Vec::new();
    match command {
        Command::Refs { schema, query } => {
            let schema = CubeSchema::parse(&read(&schema)?).map_err(|e| fail("schema", e))?;
            let (_, ast) = load_query(&query)?;
            let refs = extract_references(&ast, &schema).map_err(|e| fail("refs", e))?;
            lines.extend(refs.members);
            lines.extend(refs.measures);
        }
        Command::Scenes {
            context,
            allow_incomplete,
            query,
        } => {
            let ctx = load_context(&context)?;
            let (_, ast) = load_query(&query)?;
            let opts = SceneOptions {
                allow_incomplete,
                ..Default::default()
            };
            lines.extend(
                scenes(&ast, &ctx, &opts)?
                    .scenes()
                    .iter()
                    .map(ToString::to_string),
            );
        }
        Command::Sim {
            context,
            graphs,
            aggregation,
            a,
            b,
        } => {
            let ctx = load_context(&context)?;
            let graphs = load_graphs(graphs.as_deref())?;
            let (_, qa) = load_query(&a)?;
            let (_, qb) = load_query(&b)?;
            let opts = SceneOptions::default();
            let (sa, sb) = (scenes(&qa, &ctx, &opts)?, scenes(&qb, &ctx, &opts)?);
            let aggregation = match aggregation {
                AggregationArg::Sum => Aggregation::Sum,
                AggregationArg::MinAssignment => Aggregation::MinAssignment,
            };
            let d =
                spatial_distance_with(&sa, &sb, &ctx, &graphs, SimilarityOptions { aggregation })
                    .map_err(|e| fail("similarity", e))?;
            lines.push(d.to_string());
        }
        Command::Recommend {
            context,
            graphs,
            log,
            k,
            query,
        } => {
            let ctx = load_context(&context)?;
            let graphs = load_graphs(graphs.as_deref())?;
            let log = QueryLog::parse(&read(&log)?).map_err(|e| fail("log", e))?;
            let (text, _) = load_query(&query)?;
            let recs = recommend(&log, &text, &ctx, &graphs, k as usize)
                .map_err(|e| fail("recommend", e))?;
            for (i, r) in recs.iter().enumerate() {
                lines.push(format!(
                    "{} {} {}",
                    i + 1,
                    r.query_id,
                    format_rational(&r.score, 6)
                ));
            }
        }
        Command::Eval {
            context,
            graphs,
            queries,
            judgments,
        } => {
            let ctx = load_context(&context)?;
            let graphs = load_graphs(graphs.as_deref())?;
            let queries: BTreeMap<String, String> = if queries.is_dir() {
                queries_from_dir(&queries).map_err(|e| CliError {
                    category: "io",
                    detail: format!("{}: {e}", queries.display()),
                })?
            } else {
                let log = QueryLog::parse(&read(&queries)?).map_err(|e| fail("log", e))?;
                log.queries()
                    .map(|q| (q.id.clone(), q.mdx.clone()))
                    .collect()
            };
            let judgments = JudgmentSet::parse(&read(&judgments)?).map_err(|e| fail("eval", e))?;
            let report =
                evaluate(&judgments, &queries, &ctx, &graphs).map_err(|e| fail("eval", e))?;
            lines.push(format!("n={} rho={}", report.n, format_f64(report.rho, 4)));
            for r in &report.rows {
                lines.push(format!(
                    "{} {} {} human={} system={} human_rank={} system_rank={}",
                    r.pair_id,
                    r.query_a,
                    r.query_b,
                    r.human,
                    format_similarity(r.system),
                    r.human_rank,
                    r.system_rank
                ));
            }
        }
        Command::GraphMtc {
            family,
            graphs,
            from,
            to,
        } => {
            let graphs = load_graphs(graphs.as_deref())?;
            let family: GraphFamily = family.parse().map_err(|e| fail("graph", e))?;
            let cost = mtc(graphs.get(family), &from, &to).map_err(|e| fail("graph", e))?;
            lines.push(cost.to_string());
        }
    }
    for l in lines {
        writeln!(out, "{l}").map_err(|e| fail("io", e))?;
    }
    Ok(())
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let rendered = e.render().to_string();
                    let body = rendered.strip_prefix("error: ").unwrap_or(&rendered);
                    let _ = write!(err, "error: usage: {body}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {}", e.category, e.detail);
            EXIT_DOMAIN
        }
    }
}
