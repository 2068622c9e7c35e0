//! Qualitative vocabularies: geometry kinds, topological relations,
//! compass directions and metric categories.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid {kind} label `{value}`")]
pub struct LabelError {
    pub kind: &'static str,
    pub value: String,
}

macro_rules! label_enum {
    (
        $(#[$meta:meta])*
        $name:ident, $kind:literal {
            $($variant:ident => $text:literal),+ $(,)?
        }
    ) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = LabelError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                $name::ALL
                    .iter()
                    .copied()
                    .find(|v| v.as_str().eq_ignore_ascii_case(s))
                    .ok_or_else(|| LabelError { kind: $kind, value: s.to_string() })
            }
        }
    };
}

label_enum! {
    /// Geometry kind of a spatial object.
    Geometry, "geometry" {
        Point => "point",
        Line => "line",
        Polygon => "polygon",
    }
}

label_enum! {
    /// Binary topological relation between two geometries.
    TopoRelation, "relation" {
        Disjoint => "disjoint",
        Meet => "meet",
        Overlap => "overlap",
        Equal => "equal",
        Covers => "covers",
        CoveredBy => "coveredBy",
        Contains => "contains",
        Inside => "inside",
    }
}

label_enum! {
    /// Relative orientation of one object with respect to another.
    Direction, "direction" {
        North => "north",
        Northeast => "northeast",
        East => "east",
        Southeast => "southeast",
        South => "south",
        Southwest => "southwest",
        West => "west",
        Northwest => "northwest",
        Same => "same",
    }
}

label_enum! {
    /// Qualitative distance class between two objects.
    MetricCategory, "metric category" {
        Equal => "equal",
        Near => "near",
        Medium => "medium",
        Far => "far",
    }
}

impl TopoRelation {
    /// Relation seen from the other object: `contains(a, b)` is `inside(b, a)`.
    pub fn converse(self) -> Self {
        use TopoRelation::*;
        match self {
            Covers => CoveredBy,
            CoveredBy => Covers,
            Contains => Inside,
            Inside => Contains,
            other => other,
        }
    }
}

impl Direction {
    /// The eight compass directions in clockwise order starting at north.
    pub const COMPASS: [Direction; 8] = [
        Direction::North,
        Direction::Northeast,
        Direction::East,
        Direction::Southeast,
        Direction::South,
        Direction::Southwest,
        Direction::West,
        Direction::Northwest,
    ];

    pub fn opposite(self) -> Self {
        match Self::COMPASS.iter().position(|d| *d == self) {
            Some(i) => Self::COMPASS[(i + 4) % 8],
            None => Direction::Same,
        }
    }
}

impl MetricCategory {
    /// Position on the equal-near-medium-far chain.
    pub fn ordinal(self) -> u32 {
        match self {
            MetricCategory::Equal => 0,
            MetricCategory::Near => 1,
            MetricCategory::Medium => 2,
            MetricCategory::Far => 3,
        }
    }
}
