use std::collections::BTreeSet;
use std::fmt;

use crate::labels::TopoRelation;

/// A spatial configuration `(object_a, relation, object_b)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpatialScene {
    pub object_a: String,
    pub relation: TopoRelation,
    pub object_b: String,
}

impl SpatialScene {
    pub fn new(
        object_a: impl Into<String>,
        relation: TopoRelation,
        object_b: impl Into<String>,
    ) -> Self {
        SpatialScene {
            object_a: object_a.into(),
            relation,
            object_b: object_b.into(),
        }
    }
}

impl fmt::Display for SpatialScene {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.object_a, self.relation, self.object_b)
    }
}

/// Scenes invoked by one query, plus every object they mention.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SceneSet {
    scenes: Vec<SpatialScene>,
    objects: BTreeSet<String>,
}

impl SceneSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, scene: SpatialScene) {
        self.objects.insert(scene.object_a.clone());
        self.objects.insert(scene.object_b.clone());
        self.scenes.push(scene);
    }

    pub fn scenes(&self) -> &[SpatialScene] {
        &self.scenes
    }

    /// Object ids in lexicographic order.
    pub fn objects(&self) -> &BTreeSet<String> {
        &self.objects
    }

    pub fn is_empty(&self) -> bool {
        self.scenes.is_empty()
    }

    pub fn len(&self) -> usize {
        self.scenes.len()
    }
}

impl FromIterator<SpatialScene> for SceneSet {
    fn from_iter<I: IntoIterator<Item = SpatialScene>>(iter: I) -> Self {
        let mut set = SceneSet::new();
        for s in iter {
            set.push(s);
        }
        set
    }
}
