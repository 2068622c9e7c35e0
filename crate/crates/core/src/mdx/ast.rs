use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxisLabel {
    Columns,
    Rows,
    Pages,
    Chapters,
    Sections,
}

impl AxisLabel {
    pub fn from_keyword(word: &str) -> Option<Self> {
        Some(match word.to_ascii_uppercase().as_str() {
            "COLUMNS" => AxisLabel::Columns,
            "ROWS" => AxisLabel::Rows,
            "PAGES" => AxisLabel::Pages,
            "CHAPTERS" => AxisLabel::Chapters,
            "SECTIONS" => AxisLabel::Sections,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AxisLabel::Columns => "COLUMNS",
            AxisLabel::Rows => "ROWS",
            AxisLabel::Pages => "PAGES",
            AxisLabel::Chapters => "CHAPTERS",
            AxisLabel::Sections => "SECTIONS",
        }
    }
}

/// A dotted path of bracketed names, e.g. `[Region].[All Region].[Zone1]`.
/// Segments keep their source spelling (trimmed).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MemberPath {
    pub segments: Vec<String>,
}

impl MemberPath {
    pub fn new<I, S>(segments: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        MemberPath {
            segments: segments.into_iter().map(Into::into).collect(),
        }
    }

    pub fn leaf(&self) -> &str {
        self.segments.last().map(String::as_str).unwrap_or("")
    }

    /// `Some(name)` for `[Measures].[name]`.
    pub fn measure_name(&self) -> Option<&str> {
        match self.segments.as_slice() {
            [head, name] if head.eq_ignore_ascii_case("measures") => Some(name),
            _ => None,
        }
    }
}

impl fmt::Display for MemberPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.segments.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "[{s}]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axis {
    pub label: AxisLabel,
    pub members: Vec<MemberPath>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlicerTerm {
    Measure(String),
    Member(MemberPath),
    /// Infix binary spatial operator, e.g. `[Zone 2] intersect [Zone 3]`.
    SpatialOp {
        left: MemberPath,
        operator: String,
        right: MemberPath,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryAst {
    pub cube_name: String,
    pub axes: Vec<Axis>,
    pub slicer: Vec<SlicerTerm>,
}

impl QueryAst {
    /// Every member path in the query, axes first then slicer, operands
    /// of spatial operators included. Measures are excluded.
    pub fn member_paths(&self) -> impl Iterator<Item = &MemberPath> {
        let axes = self
            .axes
            .iter()
            .flat_map(|a| a.members.iter())
            .filter(|m| m.measure_name().is_none());
        let slicer = self.slicer.iter().flat_map(|t| match t {
            SlicerTerm::Measure(_) => Vec::new(),
            SlicerTerm::Member(m) => vec![m],
            SlicerTerm::SpatialOp { left, right, .. } => vec![left, right],
        });
        axes.chain(slicer)
    }

    pub fn measure_names(&self) -> impl Iterator<Item = &str> {
        let axes = self
            .axes
            .iter()
            .flat_map(|a| a.members.iter())
            .filter_map(MemberPath::measure_name);
        let slicer = self.slicer.iter().filter_map(|t| match t {
            SlicerTerm::Measure(m) => Some(m.as_str()),
            _ => None,
        });
        axes.chain(slicer)
    }
}
