//! Ground-truth spatial facts: objects, pairwise topological relations,
//! orientations, metric categories and scene completions.
//!
//! Relations and orientations are stored as given (directed); the reverse
//! lookup derives the converse relation or the opposite direction. Metric
//! categories are keyed by unordered pair.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::labels::{Direction, Geometry, LabelError, MetricCategory, TopoRelation};
use crate::mdx::member_key;
use crate::records::records;
use crate::scene::SpatialScene;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("line {line}: unknown record kind `{kind}`")]
    UnknownRecord { line: usize, kind: String },
    #[error("line {line}: malformed `{kind}` record")]
    Malformed { line: usize, kind: String },
    #[error("line {line}: {source}")]
    InvalidLabel { line: usize, source: LabelError },
    #[error("line {line}: object `{id}` is not declared")]
    DanglingId { line: usize, id: String },
    #[error("line {line}: object `{id}` declared twice")]
    DuplicateObject { line: usize, id: String },
    #[error("line {line}: {detail}")]
    Conflict { line: usize, detail: String },
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("no orientation between `{0}` and `{1}`")]
    MissingOrientation(String, String),
    #[error("no metric category between `{0}` and `{1}`")]
    MissingMetric(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpatialObject {
    pub id: String,
    pub geometry: Geometry,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SpatialContext {
    objects: BTreeMap<String, SpatialObject>,
    keys: HashMap<String, String>,
    relations: BTreeMap<(String, String), TopoRelation>,
    orientations: BTreeMap<(String, String), Direction>,
    metrics: BTreeMap<(String, String), MetricCategory>,
    completions: BTreeMap<String, Vec<SpatialScene>>,
}

fn unordered(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

impl SpatialContext {
    pub fn parse(source: &str) -> Result<Self, ContextError> {
        let mut ctx = SpatialContext::default();
        for rec in records(source) {
            let line = rec.line;
            let malformed = || ContextError::Malformed {
                line,
                kind: rec.kind().to_string(),
            };
            let label = |source: LabelError| ContextError::InvalidLabel { line, source };
            match rec.kind() {
                "object" => {
                    let [id, geom] = rec.args() else {
                        return Err(malformed());
                    };
                    let geometry: Geometry = geom.parse().map_err(label)?;
                    ctx.insert_object(line, id, geometry)?;
                }
                "relation" => {
                    let [a, b, r] = rec.args() else {
                        return Err(malformed());
                    };
                    let r: TopoRelation = r.parse().map_err(label)?;
                    let (a, b) = (ctx.declared(line, a)?, ctx.declared(line, b)?);
                    ctx.insert_relation(line, a, b, r)?;
                }
                "orientation" => {
                    let [a, b, d] = rec.args() else {
                        return Err(malformed());
                    };
                    let d: Direction = d.parse().map_err(label)?;
                    let (a, b) = (ctx.declared(line, a)?, ctx.declared(line, b)?);
                    ctx.insert_orientation(line, a, b, d)?;
                }
                "metric" => {
                    let [a, b, c] = rec.args() else {
                        return Err(malformed());
                    };
                    let c: MetricCategory = c.parse().map_err(label)?;
                    let (a, b) = (ctx.declared(line, a)?, ctx.declared(line, b)?);
                    ctx.insert_metric(line, a, b, c)?;
                }
                "completion" => {
                    let [a, r, b] = rec.args() else {
                        return Err(malformed());
                    };
                    let r: TopoRelation = r.parse().map_err(label)?;
                    let (a, b) = (ctx.declared(line, a)?, ctx.declared(line, b)?);
                    ctx.insert_completion(line, a, r, b)?;
                }
                other => {
                    return Err(ContextError::UnknownRecord {
                        line,
                        kind: other.to_string(),
                    })
                }
            }
        }
        Ok(ctx)
    }

    fn declared(&self, line: usize, name: &str) -> Result<String, ContextError> {
        self.resolve(name)
            .map(str::to_string)
            .ok_or_else(|| ContextError::DanglingId {
                line,
                id: name.to_string(),
            })
    }

    fn insert_object(
        &mut self,
        line: usize,
        id: &str,
        geometry: Geometry,
    ) -> Result<(), ContextError> {
        let key = member_key(id);
        if self.keys.contains_key(&key) {
            return Err(ContextError::DuplicateObject {
                line,
                id: id.to_string(),
            });
        }
        self.keys.insert(key, id.to_string());
        self.objects.insert(
            id.to_string(),
            SpatialObject {
                id: id.to_string(),
                geometry,
            },
        );
        Ok(())
    }

    fn insert_relation(
        &mut self,
        line: usize,
        a: String,
        b: String,
        r: TopoRelation,
    ) -> Result<(), ContextError> {
        if a == b && r != TopoRelation::Equal {
            return Err(ContextError::Conflict {
                line,
                detail: format!("object `{a}` can only be `equal` to itself, got `{r}`"),
            });
        }
        if let Some(existing) = self.stored_relation(&a, &b) {
            if existing != r {
                return Err(ContextError::Conflict {
                    line,
                    detail: format!("relation ({a}, {b}) is already `{existing}`, got `{r}`"),
                });
            }
        }
        self.relations.insert((a, b), r);
        Ok(())
    }

    fn insert_orientation(
        &mut self,
        line: usize,
        a: String,
        b: String,
        d: Direction,
    ) -> Result<(), ContextError> {
        if a == b && d != Direction::Same {
            return Err(ContextError::Conflict {
                line,
                detail: format!("orientation of `{a}` to itself must be `same`, got `{d}`"),
            });
        }
        if let Some(existing) = self.stored_orientation(&a, &b) {
            if existing != d {
                return Err(ContextError::Conflict {
                    line,
                    detail: format!("orientation ({a}, {b}) is already `{existing}`, got `{d}`"),
                });
            }
        }
        self.orientations.insert((a, b), d);
        Ok(())
    }

    fn insert_metric(
        &mut self,
        line: usize,
        a: String,
        b: String,
        c: MetricCategory,
    ) -> Result<(), ContextError> {
        let key = unordered(&a, &b);
        if let Some(existing) = self.metrics.get(&key) {
            if *existing != c {
                return Err(ContextError::Conflict {
                    line,
                    detail: format!(
                        "metric category {{{a}, {b}}} is already `{existing}`, got `{c}`"
                    ),
                });
            }
        }
        self.metrics.insert(key, c);
        Ok(())
    }

    fn insert_completion(
        &mut self,
        line: usize,
        a: String,
        r: TopoRelation,
        b: String,
    ) -> Result<(), ContextError> {
        if a == b && r != TopoRelation::Equal {
            return Err(ContextError::Conflict {
                line,
                detail: format!("completion scene ({a}, {r}, {a}) relates an object to itself"),
            });
        }
        if let Some(existing) = self.stored_relation(&a, &b) {
            if existing != r {
                return Err(ContextError::Conflict {
                    line,
                    detail: format!("completion ({a}, {r}, {b}) contradicts relation `{existing}`"),
                });
            }
        }
        let scene = SpatialScene::new(a.clone(), r, b);
        let entry = self.completions.entry(a).or_default();
        if !entry.contains(&scene) {
            entry.push(scene);
        }
        Ok(())
    }

    fn stored_relation(&self, a: &str, b: &str) -> Option<TopoRelation> {
        self.relations
            .get(&(a.to_string(), b.to_string()))
            .copied()
            .or_else(|| {
                self.relations
                    .get(&(b.to_string(), a.to_string()))
                    .map(|r| r.converse())
            })
    }

    fn stored_orientation(&self, a: &str, b: &str) -> Option<Direction> {
        if a == b {
            return Some(Direction::Same);
        }
        self.orientations
            .get(&(a.to_string(), b.to_string()))
            .copied()
            .or_else(|| {
                self.orientations
                    .get(&(b.to_string(), a.to_string()))
                    .map(|d| d.opposite())
            })
    }

    /// Maps a member or object name to its declared id, matching
    /// case-insensitively and ignoring whitespace.
    pub fn resolve(&self, name: &str) -> Option<&str> {
        self.keys.get(&member_key(name)).map(String::as_str)
    }

    fn require(&self, name: &str) -> Result<&str, ContextError> {
        self.resolve(name)
            .ok_or_else(|| ContextError::UnknownObject(name.to_string()))
    }

    pub fn object(&self, name: &str) -> Option<&SpatialObject> {
        self.resolve(name).and_then(|id| self.objects.get(id))
    }

    pub fn objects(&self) -> impl Iterator<Item = &SpatialObject> {
        self.objects.values()
    }

    pub fn geometry(&self, name: &str) -> Result<Geometry, ContextError> {
        let id = self.require(name)?;
        Ok(self.objects[id].geometry)
    }

    /// Explicit entry for `(a, b)`, else the converse of `(b, a)`.
    pub fn relation_of(&self, a: &str, b: &str) -> Result<Option<TopoRelation>, ContextError> {
        let (a, b) = (self.require(a)?, self.require(b)?);
        Ok(self.stored_relation(a, b))
    }

    pub fn orientation_of(&self, a: &str, b: &str) -> Result<Direction, ContextError> {
        let (a, b) = (self.require(a)?, self.require(b)?);
        self.stored_orientation(a, b)
            .ok_or_else(|| ContextError::MissingOrientation(a.to_string(), b.to_string()))
    }

    /// Symmetric; `{a, a}` is `equal` unless overridden.
    pub fn metric_category_of(&self, a: &str, b: &str) -> Result<MetricCategory, ContextError> {
        let (a, b) = (self.require(a)?, self.require(b)?);
        match self.metrics.get(&unordered(a, b)) {
            Some(c) => Ok(*c),
            None if a == b => Ok(MetricCategory::Equal),
            None => Err(ContextError::MissingMetric(a.to_string(), b.to_string())),
        }
    }

    pub fn completions(&self, name: &str) -> Result<&[SpatialScene], ContextError> {
        let id = self.require(name)?;
        Ok(self.completions.get(id).map(Vec::as_slice).unwrap_or(&[]))
    }

    /// Renders the context back into its line-oriented file form.
    pub fn to_source(&self) -> String {
        let mut out = String::new();
        for o in self.objects.values() {
            let _ = writeln!(out, "object {} {}", o.id, o.geometry);
        }
        for ((a, b), r) in &self.relations {
            let _ = writeln!(out, "relation {a} {b} {r}");
        }
        for ((a, b), d) in &self.orientations {
            let _ = writeln!(out, "orientation {a} {b} {d}");
        }
        for ((a, b), c) in &self.metrics {
            let _ = writeln!(out, "metric {a} {b} {c}");
        }
        for scenes in self.completions.values() {
            for s in scenes {
                let _ = writeln!(
                    out,
                    "completion {} {} {}",
                    s.object_a, s.relation, s.object_b
                );
            }
        }
        out
    }

    /// Builder-style constructors used by generators and tests.
    pub fn with_object(mut self, id: &str, geometry: Geometry) -> Result<Self, ContextError> {
        self.insert_object(0, id, geometry)?;
        Ok(self)
    }

    pub fn with_relation(
        mut self,
        a: &str,
        b: &str,
        r: TopoRelation,
    ) -> Result<Self, ContextError> {
        let (a, b) = (self.declared(0, a)?, self.declared(0, b)?);
        self.insert_relation(0, a, b, r)?;
        Ok(self)
    }

    pub fn with_orientation(
        mut self,
        a: &str,
        b: &str,
        d: Direction,
    ) -> Result<Self, ContextError> {
        let (a, b) = (self.declared(0, a)?, self.declared(0, b)?);
        self.insert_orientation(0, a, b, d)?;
        Ok(self)
    }

    pub fn with_metric(
        mut self,
        a: &str,
        b: &str,
        c: MetricCategory,
    ) -> Result<Self, ContextError> {
        let (a, b) = (self.declared(0, a)?, self.declared(0, b)?);
        self.insert_metric(0, a, b, c)?;
        Ok(self)
    }

    pub fn with_completion(
        mut self,
        a: &str,
        r: TopoRelation,
        b: &str,
    ) -> Result<Self, ContextError> {
        let (a, b) = (self.declared(0, a)?, self.declared(0, b)?);
        self.insert_completion(0, a, r, b)?;
        Ok(self)
    }
}
