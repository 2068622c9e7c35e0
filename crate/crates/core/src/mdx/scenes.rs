//! Scene extraction. Three sources, in this order:
//!
//! 1. explicit operator applications `A op B`, in query text order;
//! 2. every unordered pair of spatial members named without an operator,
//!    related through the context, in lexicographic order;
//! 3. a single spatial member named alone, completed from the context's
//!    completion entries.
//!
//! A member is spatial when its leaf name resolves to a context object.

use std::collections::{BTreeSet, HashMap, HashSet};

use thiserror::Error;

use super::ast::{QueryAst, SlicerTerm};
use super::member_key;
use crate::context::{ContextError, SpatialContext};
use crate::labels::TopoRelation;
use crate::scene::{SceneSet, SpatialScene};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SceneError {
    #[error("unknown spatial operator `{0}`")]
    UnknownOperator(String),
    #[error("operand {0} is not a spatial object")]
    UnresolvedOperand(String),
    #[error("no topological relation between `{0}` and `{1}`")]
    NoRelation(String, String),
    #[error("scene-incomplete: `{0}` has no completion entry")]
    Incomplete(String),
    #[error("scene relates `{0}` to itself with `{1}`")]
    SelfRelation(String, TopoRelation),
    #[error(transparent)]
    Context(#[from] ContextError),
}

/// Surface operator token to topological relation. Matching is
/// case-insensitive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorTable {
    map: HashMap<String, TopoRelation>,
}

impl Default for OperatorTable {
    fn default() -> Self {
        let mut table = OperatorTable {
            map: HashMap::new(),
        };
        for r in TopoRelation::ALL {
            table.insert(r.as_str(), *r);
        }
        table.insert("intersect", TopoRelation::Overlap);
        table
    }
}

impl OperatorTable {
    pub fn empty() -> Self {
        OperatorTable {
            map: HashMap::new(),
        }
    }

    pub fn insert(&mut self, token: &str, relation: TopoRelation) {
        self.map.insert(token.to_ascii_lowercase(), relation);
    }

    pub fn normalize(&self, token: &str) -> Option<TopoRelation> {
        self.map.get(&token.to_ascii_lowercase()).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SceneOptions {
    pub operators: OperatorTable,
    /// Lets a lone member without completion entries yield zero scenes
    /// instead of failing.
    pub allow_incomplete: bool,
}

pub fn extract_scenes(ast: &QueryAst, ctx: &SpatialContext) -> Result<SceneSet, SceneError> {
    extract_scenes_with(ast, ctx, &SceneOptions::default())
}

pub fn extract_scenes_with(
    ast: &QueryAst,
    ctx: &SpatialContext,
    opts: &SceneOptions,
) -> Result<SceneSet, SceneError> {
    let mut set = SceneSet::new();
    let mut operands: HashSet<String> = HashSet::new();

    for term in &ast.slicer {
        if let SlicerTerm::SpatialOp {
            left,
            operator,
            right,
        } = term
        {
            let relation = opts
                .operators
                .normalize(operator)
                .ok_or_else(|| SceneError::UnknownOperator(operator.clone()))?;
            let a = ctx
                .resolve(left.leaf())
                .ok_or_else(|| SceneError::UnresolvedOperand(left.to_string()))?;
            let b = ctx
                .resolve(right.leaf())
                .ok_or_else(|| SceneError::UnresolvedOperand(right.to_string()))?;
            if a == b && relation != TopoRelation::Equal {
                return Err(SceneError::SelfRelation(a.to_string(), relation));
            }
            operands.insert(member_key(a));
            operands.insert(member_key(b));
            set.push(SpatialScene::new(a, relation, b));
        }
    }

    let free: BTreeSet<&str> = ast
        .member_paths()
        .filter_map(|p| ctx.resolve(p.leaf()))
        .filter(|id| !operands.contains(&member_key(id)))
        .collect();
    let free: Vec<&str> = free.into_iter().collect();

    match free.as_slice() {
        [] => {}
        [lone] => {
            let completions = ctx.completions(lone)?;
            if completions.is_empty() && !opts.allow_incomplete {
                return Err(SceneError::Incomplete(lone.to_string()));
            }
            let mut sorted = completions.to_vec();
            sorted.sort();
            for s in sorted {
                set.push(s);
            }
        }
        many => {
            for (i, a) in many.iter().enumerate() {
                for b in &many[i + 1..] {
                    let r = ctx
                        .relation_of(a, b)?
                        .ok_or_else(|| SceneError::NoRelation(a.to_string(), b.to_string()))?;
                    set.push(SpatialScene::new(*a, r, *b));
                }
            }
        }
    }
    Ok(set)
}
