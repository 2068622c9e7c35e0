//! Shared reader for the whitespace-separated, `#`-commented record files
//! (context, schema, graph config, judgments).

/// One non-empty record: its 1-based line number and its fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record<'a> {
    pub line: usize,
    pub fields: Vec<&'a str>,
}

impl<'a> Record<'a> {
    pub fn kind(&self) -> &'a str {
        self.fields[0]
    }

    pub fn args(&self) -> &[&'a str] {
        &self.fields[1..]
    }
}

pub fn records(source: &str) -> impl Iterator<Item = Record<'_>> {
    source.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.is_empty() {
            None
        } else {
            Some(Record {
                line: i + 1,
                fields,
            })
        }
    })
}
