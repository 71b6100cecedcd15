//! Plain-text rendering.
//!
//! Font switches are dropped; structure is carried by layout alone. Draft
//! mode appends ` [label]` annotations and nothing else, so stripping those
//! annotations from a draft rendering gives the normal rendering.

use std::fmt;

use crate::indexer::PageModel;
use crate::parser::{BoilerplateKind, EqPlacement, SectionKind};

/// Width used for centering and right alignment.
pub const TEXT_WIDTH: usize = 72;

const EQUATION_GAP: &str = "    ";

pub fn center(s: &str) -> String {
    let len = s.chars().count();
    if len >= TEXT_WIDTH {
        return s.to_string();
    }
    format!("{}{}", " ".repeat((TEXT_WIDTH - len) / 2), s)
}

pub fn right_align(s: &str) -> String {
    format!("{s:>TEXT_WIDTH$}")
}

fn annotate(mut line: String, draft: bool, label: &str) -> String {
    if draft {
        line.push_str(" [");
        line.push_str(label);
        line.push(']');
    }
    line
}

pub fn render_heading(
    kind: SectionKind,
    number: &str,
    title: &str,
    draft: bool,
    label: &str,
) -> Vec<String> {
    match kind {
        SectionKind::Section => vec![annotate(format!("{number}.  {title}"), draft, label)],
        SectionKind::Chapter => vec![annotate(center(title), draft, label)],
        SectionKind::Semi => vec![title.to_string()],
        SectionKind::Paragraph => vec![annotate(format!("{number} {title}"), draft, label)],
    }
}

pub fn render_equation(
    body: &str,
    value: &str,
    side: EqPlacement,
    draft: bool,
    label: &str,
) -> Vec<String> {
    let tag = format!("({value})");
    match side {
        EqPlacement::Right if body.is_empty() => vec![annotate(tag, draft, label)],
        EqPlacement::Right => vec![annotate(format!("{body}{EQUATION_GAP}{tag}"), draft, label)],
        // The left-numbered form never carries a draft annotation.
        EqPlacement::Left if body.is_empty() => vec![tag],
        EqPlacement::Left => vec![format!("{tag}{EQUATION_GAP}{body}")],
        EqPlacement::Silent => Vec::new(),
    }
}

/// `Theorem 3.1.` with the draft label placed before the period.
pub fn theorem_head(kind_name: &str, value: &str, draft: bool, label: &str) -> String {
    let mut head = annotate(format!("{kind_name} {value}"), draft, label);
    head.push('.');
    head
}

pub fn render_theorem(
    kind_name: &str,
    value: &str,
    body: &str,
    draft: bool,
    label: &str,
) -> Vec<String> {
    let head = theorem_head(kind_name, value, draft, label);
    if body.is_empty() {
        vec![head]
    } else {
        vec![format!("{head} {body}")]
    }
}

pub const FIRMA: [&str; 4] = [
    "D. Bertacchi - F. Zucca",
    "Università degli Studi di Milano",
    "Dipartimento di Matematica F. Enriques",
    "Via Saldini 50, 20133 Milano, Italy.",
];

pub fn render_boilerplate(kind: BoilerplateKind, arg: Option<&str>) -> Vec<String> {
    match kind {
        BoilerplateKind::Proof => vec!["Proof. ".to_string()],
        BoilerplateKind::Abstract => vec!["Abstract.".to_string()],
        BoilerplateKind::Summary => vec![center("Summary.")],
        BoilerplateKind::Firma => FIRMA.iter().map(|l| center(l)).collect(),
        BoilerplateKind::Title => vec![center(arg.unwrap_or_default())],
        BoilerplateKind::Rivista => arg.map(str::to_string).into_iter().collect(),
        BoilerplateKind::Comment => Vec::new(),
    }
}

/// The QED box as a text line.
pub fn qed_line() -> String {
    right_align("∎")
}

/// Expand the control symbols and ties that can appear in running text.
pub fn unescape_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => match chars.next() {
                Some(e @ ('%' | '&' | '$' | '#' | '_' | '{' | '}' | ' ')) => out.push(e),
                Some(',') => {}
                Some(e) => {
                    out.push('\\');
                    out.push(e);
                }
                None => out.push('\\'),
            },
            '~' => out.push(' '),
            _ => out.push(c),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RenderedLine {
    Text(String),
    /// Start of the given page.
    PageBreak(u64),
}

impl fmt::Display for RenderedLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RenderedLine::Text(s) => f.write_str(s),
            RenderedLine::PageBreak(n) => write!(f, "===== page {n} ====="),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RenderedDoc {
    pub lines: Vec<RenderedLine>,
}

impl RenderedDoc {
    /// LF-terminated text form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            out.push_str(&line.to_string());
            out.push('\n');
        }
        out
    }
}

/// Accumulates rendered lines while tracking simulated pages.
#[derive(Debug, Clone)]
pub struct Layout {
    doc: RenderedDoc,
    pub pages: PageModel,
    marked_page: u64,
    pending: String,
    needs_separator: bool,
}

impl Layout {
    pub fn new(lines_per_page: usize) -> Self {
        Layout {
            doc: RenderedDoc::default(),
            pages: PageModel::new(lines_per_page),
            marked_page: 1,
            pending: String::new(),
            needs_separator: false,
        }
    }

    fn push_line(&mut self, line: String) {
        let page = self.pages.page();
        while self.marked_page < page {
            self.marked_page += 1;
            self.doc
                .lines
                .push(RenderedLine::PageBreak(self.marked_page));
        }
        self.doc.lines.push(RenderedLine::Text(line));
        self.pages.advance();
    }

    /// Append running text to the current paragraph.
    pub fn inline(&mut self, text: &str, space_before: bool) {
        if text.is_empty() {
            return;
        }
        if space_before && !self.pending.is_empty() && !self.pending.ends_with(' ') {
            self.pending.push(' ');
        }
        self.pending.push_str(text);
    }

    /// End the current paragraph, if any.
    pub fn flush(&mut self) {
        let text = std::mem::take(&mut self.pending);
        let text = text.trim_end();
        if !text.is_empty() {
            self.block(vec![text.to_string()]);
        }
    }

    /// Start a paragraph with `prefix` and let running text follow it.
    pub fn open_paragraph(&mut self, prefix: &str) {
        self.flush();
        self.pending = prefix.trim_end().to_string();
        self.pending.push(' ');
    }

    /// Page on which the next block's first line will land.
    pub fn next_block_page(&self) -> u64 {
        let mut probe = self.pages.clone();
        let mut separator = self.needs_separator;
        if !self.pending.trim_end().is_empty() {
            if separator && !probe.at_page_top() {
                probe.advance();
            }
            probe.advance();
            separator = true;
        }
        if separator && !probe.at_page_top() {
            probe.advance();
        }
        probe.page()
    }

    /// Emit a block separated from the previous one by a blank line;
    /// returns the page of its first line.
    pub fn block(&mut self, lines: Vec<String>) -> u64 {
        self.flush_pending_only();
        if lines.is_empty() {
            return self.pages.page();
        }
        // No separator at the top of a page.
        if self.needs_separator && !self.pages.at_page_top() {
            self.push_line(String::new());
        }
        let page = self.pages.page();
        for l in lines {
            self.push_line(l);
        }
        self.needs_separator = true;
        page
    }

    /// Emit lines directly under the previous block.
    pub fn block_tight(&mut self, lines: Vec<String>) {
        self.flush_pending_only();
        for l in lines {
            self.push_line(l);
        }
        self.needs_separator = true;
    }

    fn flush_pending_only(&mut self) {
        if !self.pending.is_empty() {
            self.flush();
        }
    }

    pub fn eject(&mut self) {
        self.flush();
        self.pages.eject();
        self.needs_separator = false;
    }

    pub fn blank_page(&mut self) {
        self.flush();
        self.pages.blank_page();
        self.needs_separator = false;
    }

    pub fn finish(mut self) -> RenderedDoc {
        self.flush();
        self.doc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn headings() {
        assert_eq!(
            render_heading(SectionKind::Section, "2", "Methods", false, "sec:methods"),
            vec!["2.  Methods"]
        );
        assert_eq!(
            render_heading(SectionKind::Section, "2", "Methods", true, "sec:methods"),
            vec!["2.  Methods [sec:methods]"]
        );
        assert_eq!(
            render_heading(SectionKind::Paragraph, "2.1", "Setup", false, "p"),
            vec!["2.1 Setup"]
        );
        assert_eq!(
            render_heading(SectionKind::Semi, "", "Appendix", true, "A"),
            vec!["Appendix"]
        );
        let chapter = render_heading(SectionKind::Chapter, "1", "Results", false, "c");
        assert_eq!(chapter[0].trim(), "Results");
        assert!(chapter[0].starts_with("  "));
    }

    #[test]
    fn equations() {
        assert_eq!(
            render_equation("E=mc^2", "2.1", EqPlacement::Right, false, "e:m"),
            vec!["E=mc^2    (2.1)"]
        );
        assert_eq!(
            render_equation("E=mc^2", "2.1", EqPlacement::Left, false, "e:m"),
            vec!["(2.1)    E=mc^2"]
        );
        assert_eq!(
            render_equation("E=mc^2", "2.1", EqPlacement::Right, true, "e:m"),
            vec!["E=mc^2    (2.1) [e:m]"]
        );
        assert_eq!(
            render_equation("E=mc^2", "2.1", EqPlacement::Left, true, "e:m"),
            vec!["(2.1)    E=mc^2"]
        );
    }

    #[test]
    fn theorems() {
        assert_eq!(
            render_theorem("Theorem", "3.1", "Let x…", false, "t"),
            vec!["Theorem 3.1. Let x…"]
        );
        assert_eq!(
            render_theorem("Remark", "3.2", "note", false, "r"),
            vec!["Remark 3.2. note"]
        );
        assert_eq!(
            render_theorem("Lemma", "3.3", "…", true, "lm:a"),
            vec!["Lemma 3.3 [lm:a]. …"]
        );
    }

    #[test]
    fn boilerplate() {
        assert!(render_boilerplate(BoilerplateKind::Proof, None)[0].starts_with("Proof."));
        assert_eq!(
            render_boilerplate(BoilerplateKind::Abstract, None),
            vec!["Abstract."]
        );
        assert_eq!(
            render_boilerplate(BoilerplateKind::Summary, None)[0].trim(),
            "Summary."
        );
        let firma = render_boilerplate(BoilerplateKind::Firma, None);
        assert_eq!(firma.len(), 4);
        assert_eq!(firma[0].trim(), "D. Bertacchi - F. Zucca");
        assert_eq!(
            render_boilerplate(BoilerplateKind::Title, Some("On Widgets"))[0].trim(),
            "On Widgets"
        );
        assert!(render_boilerplate(BoilerplateKind::Comment, Some("x")).is_empty());
        assert!(qed_line().ends_with('∎'));
        assert_eq!(qed_line().chars().count(), TEXT_WIDTH);
    }

    #[test]
    fn unescape() {
        assert_eq!(unescape_text("50\\% of J.~Smith"), "50% of J. Smith");
        assert_eq!(unescape_text("\\alpha"), "\\alpha");
    }

    #[test]
    fn layout_paragraphs_and_pages() {
        let mut l = Layout::new(3);
        l.inline("hello", false);
        l.inline("world", true);
        l.flush();
        l.block(vec!["a".into()]);
        l.eject();
        l.block(vec!["b".into()]);
        let text = l.finish().to_text();
        assert_eq!(text, "hello world\n\na\n===== page 2 =====\nb\n");
    }

    #[test]
    fn no_separator_at_page_top() {
        let mut l = Layout::new(2);
        l.block(vec!["a".into(), "b".into()]);
        assert_eq!(l.next_block_page(), 2);
        assert_eq!(l.block(vec!["c".into()]), 2);
        assert_eq!(l.finish().to_text(), "a\nb\n===== page 2 =====\nc\n");
    }
}
