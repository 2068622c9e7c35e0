//! Cube schema: dimensions with their All-members, and measures.

use std::collections::HashSet;

use thiserror::Error;

use crate::records::records;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("line {line}: unknown record kind `{kind}`")]
    UnknownRecord { line: usize, kind: String },
    #[error("line {line}: malformed `{kind}` record: {detail}")]
    Malformed {
        line: usize,
        kind: String,
        detail: String,
    },
    #[error("duplicate dimension `{0}`")]
    DuplicateDimension(String),
    #[error("duplicate measure `{0}`")]
    DuplicateMeasure(String),
    #[error("schema declares no measure")]
    NoMeasure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dimension {
    pub name: String,
    pub all_member: String,
    pub spatial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CubeSchema {
    pub dimensions: Vec<Dimension>,
    pub measures: Vec<String>,
}

impl CubeSchema {
    pub fn parse(source: &str) -> Result<Self, SchemaError> {
        let mut schema = CubeSchema::default();
        for rec in records(source) {
            let malformed = |detail: &str| SchemaError::Malformed {
                line: rec.line,
                kind: rec.kind().to_string(),
                detail: detail.to_string(),
            };
            match rec.kind() {
                "dimension" => {
                    let [name, all, flag] = rec.args() else {
                        return Err(malformed(
                            "expected `dimension <name> <allMember> <spatial|nonspatial>`",
                        ));
                    };
                    let spatial = match *flag {
                        "spatial" => true,
                        "nonspatial" => false,
                        _ => return Err(malformed("flag must be `spatial` or `nonspatial`")),
                    };
                    schema.dimensions.push(Dimension {
                        name: name.to_string(),
                        all_member: all.to_string(),
                        spatial,
                    });
                }
                "measure" => {
                    let [name] = rec.args() else {
                        return Err(malformed("expected `measure <name>`"));
                    };
                    schema.measures.push(name.to_string());
                }
                other => {
                    return Err(SchemaError::UnknownRecord {
                        line: rec.line,
                        kind: other.to_string(),
                    })
                }
            }
        }
        schema.validate()?;
        Ok(schema)
    }

    pub fn validate(&self) -> Result<(), SchemaError> {
        let mut seen = HashSet::new();
        for d in &self.dimensions {
            if !seen.insert(d.name.to_ascii_lowercase()) {
                return Err(SchemaError::DuplicateDimension(d.name.clone()));
            }
        }
        let mut seen = HashSet::new();
        for m in &self.measures {
            if !seen.insert(m.to_ascii_lowercase()) {
                return Err(SchemaError::DuplicateMeasure(m.clone()));
            }
        }
        if self.measures.is_empty() {
            return Err(SchemaError::NoMeasure);
        }
        Ok(())
    }

    /// Dimension names match case-insensitively, ignoring whitespace.
    pub fn dimension(&self, name: &str) -> Option<&Dimension> {
        let key = crate::mdx::member_key(name);
        self.dimensions
            .iter()
            .find(|d| crate::mdx::member_key(&d.name) == key)
    }

    pub fn measure(&self, name: &str) -> Option<&str> {
        let key = crate::mdx::member_key(name);
        self.measures
            .iter()
            .find(|m| crate::mdx::member_key(m) == key)
            .map(String::as_str)
    }

    pub fn spatial_dimensions(&self) -> impl Iterator<Item = &Dimension> {
        self.dimensions.iter().filter(|d| d.spatial)
    }
}
