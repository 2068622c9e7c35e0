//! Parsing of the supported MDX subset and extraction of query references
//! and spatial scenes.

mod ast;
mod lexer;
mod parser;
mod refs;
mod scenes;

pub use ast::{Axis, AxisLabel, MemberPath, QueryAst, SlicerTerm};
pub use parser::{parse_query, ParseError};
pub use refs::{extract_references, QueryReferences, RefError};
pub use scenes::{extract_scenes, extract_scenes_with, OperatorTable, SceneError, SceneOptions};

/// Lookup key for member, dimension and object names: case-folded with all
/// whitespace removed, so `[Zone 1]` matches object `zone1`.
pub fn member_key(name: &str) -> String {
    name.chars()
        .filter(|c| !c.is_whitespace())
        .flat_map(char::to_lowercase)
        .collect()
}

/// Display identifier for a member name: whitespace removed, case kept.
pub fn member_id(name: &str) -> String {
    name.chars().filter(|c| !c.is_whitespace()).collect()
}
