//! Table of contents ("Indice") with simulated page numbers.
//!
//! The index follows a two-pass existence protocol: a pass that starts
//! without `<jobname>.ind` records entries and writes the file; a pass that
//! finds the file renders it and records nothing.

use std::fmt;

use thiserror::Error;

use crate::renderer::center;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndexError {
    #[error("index line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexKind {
    Chapter,
    Paragraph,
    Bibliography,
    /// The index's own entry, written by `\quiindice`.
    Index,
}

impl IndexKind {
    fn tag(self) -> &'static str {
        match self {
            IndexKind::Chapter => "chapter",
            IndexKind::Paragraph => "paragraph",
            IndexKind::Bibliography => "bibliography",
            IndexKind::Index => "index",
        }
    }

    fn from_tag(tag: &str) -> Option<Self> {
        [
            IndexKind::Chapter,
            IndexKind::Paragraph,
            IndexKind::Bibliography,
            IndexKind::Index,
        ]
        .into_iter()
        .find(|k| k.tag() == tag)
    }
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexEntry {
    pub kind: IndexKind,
    pub number: String,
    pub title: String,
    pub page: u64,
}

/// Line-counting stand-in for real pagination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PageModel {
    pub lines_per_page: usize,
    /// Lines consumed so far, including page padding.
    pub line: usize,
}

impl PageModel {
    pub fn new(lines_per_page: usize) -> Self {
        assert!(lines_per_page >= 1, "lines_per_page must be positive");
        PageModel {
            lines_per_page,
            line: 0,
        }
    }

    /// Page on which the next line lands.
    pub fn page(&self) -> u64 {
        1 + (self.line / self.lines_per_page) as u64
    }

    /// Nothing has been put on the current page yet.
    pub fn at_page_top(&self) -> bool {
        self.line.is_multiple_of(self.lines_per_page)
    }

    pub fn advance(&mut self) {
        self.line += 1;
    }

    /// Finish the current page unless nothing has been put on it.
    pub fn eject(&mut self) {
        let rem = self.line % self.lines_per_page;
        if rem != 0 {
            self.line += self.lines_per_page - rem;
        }
    }

    /// Ship a page holding nothing but an empty box.
    pub fn blank_page(&mut self) {
        self.eject();
        self.line += self.lines_per_page;
    }

    /// Pad forward so at least `pages` full pages are used since `start`.
    pub fn pad_from(&mut self, start: usize, pages: usize) {
        self.line = self.line.max(start + pages * self.lines_per_page);
    }
}

impl Default for PageModel {
    fn default() -> Self {
        PageModel::new(40)
    }
}

/// Index bookkeeping for one pass.
#[derive(Debug, Clone, Default)]
pub struct IndexState {
    pub enabled: bool,
    /// Entries read from an existing `.ind`; `Some` means this pass renders.
    pub loaded: Option<Vec<IndexEntry>>,
    pub entries: Vec<IndexEntry>,
}

impl IndexState {
    pub fn new(enabled: bool, existing: Option<&str>) -> Result<Self, IndexError> {
        let loaded = match (enabled, existing) {
            (true, Some(text)) => Some(parse_index(text)?),
            _ => None,
        };
        Ok(IndexState {
            enabled,
            loaded,
            entries: Vec::new(),
        })
    }

    /// True while this pass produces the index file.
    pub fn generating(&self) -> bool {
        self.enabled && self.loaded.is_none()
    }

    pub fn record_entry(&mut self, kind: IndexKind, number: &str, title: &str, page: u64) {
        if self.generating() {
            self.entries.push(IndexEntry {
                kind,
                number: number.to_string(),
                title: title.to_string(),
                page,
            });
        }
    }
}

/// Tab-separated `.ind` text: `kind<TAB>number<TAB>title<TAB>page` per line.
pub fn serialize_index(entries: &[IndexEntry]) -> String {
    entries
        .iter()
        .map(|e| {
            let clean = |s: &str| s.replace(['\t', '\n'], " ");
            format!(
                "{}\t{}\t{}\t{}\n",
                e.kind,
                clean(&e.number),
                clean(&e.title),
                e.page
            )
        })
        .collect()
}

pub fn parse_index(text: &str) -> Result<Vec<IndexEntry>, IndexError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let malformed = |reason: &str| IndexError::Malformed {
            line: i + 1,
            reason: reason.to_string(),
        };
        let fields: Vec<&str> = line.split('\t').collect();
        let [kind, number, title, page] = fields[..] else {
            return Err(malformed("expected four tab-separated fields"));
        };
        let kind = IndexKind::from_tag(kind).ok_or_else(|| malformed("unknown entry kind"))?;
        let page = page
            .parse::<u64>()
            .ok()
            .filter(|p| *p >= 1)
            .ok_or_else(|| malformed("page must be a positive integer"))?;
        out.push(IndexEntry {
            kind,
            number: number.to_string(),
            title: title.to_string(),
            page,
        });
    }
    Ok(out)
}

/// Index block: centered `Indice` header, then one line per entry in
/// document order.
pub fn render_index(entries: &[IndexEntry]) -> Vec<String> {
    let mut lines = vec![center("Indice")];
    for e in entries {
        lines.push(match e.kind {
            IndexKind::Chapter => format!("{}. {}  {}", e.number, e.title, e.page),
            IndexKind::Paragraph => format!("    {}. {} ..... {}", e.number, e.title, e.page),
            IndexKind::Bibliography | IndexKind::Index => format!("{}  {}", e.title, e.page),
        });
    }
    lines
}
