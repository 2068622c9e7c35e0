use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use super::ast::{MemberPath, QueryAst};
use super::{member_id, member_key};
use crate::schema::{CubeSchema, Dimension};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RefError {
    #[error("member {0} does not resolve to a schema dimension")]
    UnresolvedMember(String),
    #[error("bare member {0} is ambiguous: the schema needs exactly one spatial dimension")]
    AmbiguousMember(String),
    #[error("unknown measure `{0}`")]
    UnknownMeasure(String),
}

/// Members and measures a query invokes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QueryReferences {
    pub members: BTreeSet<String>,
    pub measures: BTreeSet<String>,
}

/// Resolves which dimension a member path belongs to. A path whose first
/// segment names a dimension belongs to it; a single bare name such as
/// `[Zone 3]` belongs to the schema's only spatial dimension.
fn dimension_of<'s>(path: &MemberPath, schema: &'s CubeSchema) -> Result<&'s Dimension, RefError> {
    if let Some(d) = schema.dimension(&path.segments[0]) {
        return Ok(d);
    }
    if path.segments.len() > 1 {
        return Err(RefError::UnresolvedMember(path.to_string()));
    }
    let mut spatial = schema.spatial_dimensions();
    match (spatial.next(), spatial.next()) {
        (Some(d), None) => Ok(d),
        _ => Err(RefError::AmbiguousMember(path.to_string())),
    }
}

pub fn extract_references(
    ast: &QueryAst,
    schema: &CubeSchema,
) -> Result<QueryReferences, RefError> {
    let mut refs = QueryReferences::default();
    let mut covered: HashSet<String> = HashSet::new();

    for path in ast.member_paths() {
        let dim = dimension_of(path, schema)?;
        covered.insert(dim.name.clone());
        // `[Region]` alone stands for the dimension's All-member
        let names_dimension =
            path.segments.len() == 1 && member_key(&path.segments[0]) == member_key(&dim.name);
        let leaf = if names_dimension || member_key(path.leaf()) == member_key(&dim.all_member) {
            dim.all_member.clone()
        } else {
            member_id(path.leaf())
        };
        refs.members.insert(leaf);
    }
    for d in &schema.dimensions {
        if !covered.contains(&d.name) {
            refs.members.insert(d.all_member.clone());
        }
    }
    for m in ast.measure_names() {
        let name = schema
            .measure(m)
            .ok_or_else(|| RefError::UnknownMeasure(m.to_string()))?;
        refs.measures.insert(name.to_string());
    }
    Ok(refs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mdx::parse_query;

    fn schema() -> CubeSchema {
        CubeSchema::parse(
            "dimension Product AllProducts nonspatial\n\
             dimension Region AllRegion spatial\n\
             dimension Time AllTime nonspatial\n\
             measure Quantity\n",
        )
        .unwrap()
    }

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn first_example_references() {
        let ast = parse_query(
            "SELECT {[Product].[All Products].[NoBiological]} ON COLUMNS, FROM [Production] \
             WHERE {[Measures].[Quantity]} AND {[Region].[All Region].[Region1].[Zone1]}",
        )
        .unwrap();
        let r = extract_references(&ast, &schema()).unwrap();
        assert_eq!(r.members, set(&["AllTime", "NoBiological", "Zone1"]));
        assert_eq!(r.measures, set(&["Quantity"]));
    }

    #[test]
    fn operator_operands_are_members_and_operator_is_not() {
        let ast = parse_query(
            "SELECT {[Product].[All Products].[Biological]} ON COLUMNS, FROM [Production] \
             WHERE {[Measures].[Quantity]} AND {[Region].[All Region].[Region1].[Zone 2] intersect [Zone 3]}",
        )
        .unwrap();
        let r = extract_references(&ast, &schema()).unwrap();
        assert_eq!(r.members, set(&["AllTime", "Biological", "Zone2", "Zone3"]));
        assert_eq!(r.measures, set(&["Quantity"]));
    }

    #[test]
    fn measure_only_query_defaults_every_dimension() {
        let ast =
            parse_query("SELECT {[Measures].[Quantity]} ON COLUMNS FROM [Production]").unwrap();
        let r = extract_references(&ast, &schema()).unwrap();
        assert_eq!(r.members, set(&["AllProducts", "AllRegion", "AllTime"]));
        assert_eq!(r.measures, set(&["Quantity"]));
    }

    #[test]
    fn explicit_all_member_and_dimension_alone() {
        let ast = parse_query("SELECT {[Time].[All Time], [Region]} ON COLUMNS FROM [P] WHERE {[Measures].[quantity]}").unwrap();
        let r = extract_references(&ast, &schema()).unwrap();
        assert_eq!(r.members, set(&["AllProducts", "AllRegion", "AllTime"]));
        assert_eq!(r.measures, set(&["Quantity"]));
    }

    #[test]
    fn resolution_errors() {
        let s = schema();
        let ast = parse_query("SELECT {[Store].[X]} ON COLUMNS FROM [P]").unwrap();
        assert!(matches!(
            extract_references(&ast, &s),
            Err(RefError::UnresolvedMember(_))
        ));
        let ast = parse_query("SELECT {[Measures].[Price]} ON COLUMNS FROM [P]").unwrap();
        assert_eq!(
            extract_references(&ast, &s),
            Err(RefError::UnknownMeasure("Price".into()))
        );
        let two_spatial =
            CubeSchema::parse("dimension A AllA spatial\ndimension B AllB spatial\nmeasure m")
                .unwrap();
        let ast = parse_query("SELECT {[Zone 3]} ON COLUMNS FROM [P]").unwrap();
        assert!(matches!(
            extract_references(&ast, &two_spatial),
            Err(RefError::AmbiguousMember(_))
        ));
    }
}
