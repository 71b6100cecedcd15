//! Citation numbering in order of first use and the generated bibliography.

use std::collections::HashMap;

use thiserror::Error;

use crate::diag::Diagnostic;
use crate::labels::{LabelTable, Namespace};
use crate::numbering::CounterBank;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CiteError {
    #[error("citation form {form:?} takes {expected} label(s), got {got}")]
    Arity {
        form: CitationForm,
        expected: usize,
        got: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CitationForm {
    /// `\cref`: the bare number.
    Bare,
    /// `\upcref`
    UpBare,
    /// `\cite`
    Single,
    /// `\ccite`
    Pair,
    /// `\ncite`
    Range,
    /// `\upcite`
    UpSingle,
    /// `\upccite`
    UpPair,
    /// `\upncite`
    UpRange,
    /// `\clabel` and friends: numbers without printing.
    Label,
}

impl CitationForm {
    /// Number of labels the form takes; `None` for the variadic label form.
    pub fn arity(self) -> Option<usize> {
        match self {
            CitationForm::Bare
            | CitationForm::UpBare
            | CitationForm::Single
            | CitationForm::UpSingle => Some(1),
            CitationForm::Pair
            | CitationForm::Range
            | CitationForm::UpPair
            | CitationForm::UpRange => Some(2),
            CitationForm::Label => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CitationStyle {
    pub cite_left: String,
    pub cite_right: String,
    pub bibl_left: String,
    pub bibl_right: String,
}

impl Default for CitationStyle {
    fn default() -> Self {
        CitationStyle {
            cite_left: "[".into(),
            cite_right: "]".into(),
            bibl_left: "[".into(),
            bibl_right: "]".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntryKind {
    Normal,
    /// `\clabel` on an already numbered label.
    Redefinition,
}

/// One line of the bibliography file, captured when the citation is numbered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BibEntry {
    pub number: u64,
    pub label: String,
    pub kind: EntryKind,
    /// Bibliography brackets in force when the entry was written.
    pub left: String,
    pub right: String,
}

/// Finished bibliography: the `.bib` file text and the rendered list.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Bibliography {
    pub file: String,
    pub block: Vec<String>,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, Default)]
pub struct CitationState {
    /// Entries are only written in auto-bibliography mode.
    pub recording: bool,
    pub entries: Vec<BibEntry>,
    bib_texts: HashMap<String, String>,
    /// `\biblskip` argument, recorded only.
    pub skip: Option<String>,
}

impl CitationState {
    pub fn new(recording: bool) -> Self {
        CitationState {
            recording,
            ..Default::default()
        }
    }

    pub fn define_bibitem(&mut self, label: &str, text: &str) {
        self.bib_texts.insert(label.to_string(), text.to_string());
    }

    fn record(&mut self, number: u64, label: &str, kind: EntryKind, style: &CitationStyle) {
        if self.recording {
            self.entries.push(BibEntry {
                number,
                label: label.to_string(),
                kind,
                left: style.bibl_left.clone(),
                right: style.bibl_right.clone(),
            });
        }
    }

    /// Number of `label`, assigning the next one on first use.
    pub fn cite_number(
        &mut self,
        table: &mut LabelTable,
        bank: &mut CounterBank,
        label: &str,
        style: &CitationStyle,
    ) -> u64 {
        if let Some(n) = table.get(Namespace::Citation, label) {
            return n.parse().expect("citation numbers are integers");
        }
        let n = bank.next_citation();
        table.define(Namespace::Citation, label, &n.to_string());
        self.record(n, label, EntryKind::Normal, style);
        n
    }

    /// `\clabel`: like a first citation, but an existing label is renumbered
    /// and a redefinition entry goes to the bibliography.
    pub fn clabel(
        &mut self,
        table: &mut LabelTable,
        bank: &mut CounterBank,
        label: &str,
        style: &CitationStyle,
    ) -> u64 {
        if !table.contains(Namespace::Citation, label) {
            return self.cite_number(table, bank, label, style);
        }
        let n = bank.next_citation();
        table.define(Namespace::Citation, label, &n.to_string());
        self.record(n, label, EntryKind::Redefinition, style);
        n
    }

    /// Text of a `\biblitem`. A missing item warns once, after which its
    /// text is the ` ??` placeholder.
    pub fn bib_text(&mut self, label: &str) -> (String, Option<Diagnostic>) {
        if let Some(t) = self.bib_texts.get(label) {
            return (t.clone(), None);
        }
        self.bib_texts.insert(label.to_string(), " ??".to_string());
        (
            " ??".to_string(),
            Some(Diagnostic::undefined_biblitem(label)),
        )
    }

    /// Resolve entry texts and build the bibliography file and block.
    pub fn emit_bibliography(&mut self) -> Bibliography {
        let mut out = Bibliography::default();
        let mut items = Vec::new();
        for entry in self.entries.clone() {
            let tag = format!("{}{}{}", entry.left, entry.number, entry.right);
            match entry.kind {
                EntryKind::Normal => {
                    let (text, warn) = self.bib_text(&entry.label);
                    out.diagnostics.extend(warn);
                    items.push(format!("\\item{{{tag}}} {text}"));
                    out.block.push(format!("{tag} {text}"));
                }
                EntryKind::Redefinition => {
                    let note = format!(
                        "??? tentativo di ridefinire la citazione {} !!!",
                        entry.label
                    );
                    items.push(format!("\\item{{?? {tag}}} {note}"));
                    out.block.push(format!("?? {tag} {note}"));
                }
            }
        }
        if !items.is_empty() {
            out.file = items.join("\n\n");
            out.file.push('\n');
        }
        out
    }
}

/// Inline text of a citation command given its resolved numbers.
pub fn render_citation(
    form: CitationForm,
    numbers: &[u64],
    style: &CitationStyle,
) -> Result<String, CiteError> {
    let expected = form.arity().unwrap_or(numbers.len());
    if numbers.len() != expected || numbers.is_empty() {
        return Err(CiteError::Arity {
            form,
            expected: expected.max(1),
            got: numbers.len(),
        });
    }
    let wrap = |inner: String| format!("{}{}{}", style.cite_left, inner, style.cite_right);
    let (a, b) = (numbers[0], numbers.get(1).copied().unwrap_or(0));
    Ok(match form {
        CitationForm::Bare => a.to_string(),
        CitationForm::UpBare => format!("^{a}"),
        CitationForm::Single => wrap(a.to_string()),
        CitationForm::Pair => wrap(format!("{a},{b}")),
        CitationForm::Range => wrap(format!("{a}--{b}")),
        CitationForm::UpSingle => format!("^{}", wrap(a.to_string())),
        CitationForm::UpPair => format!("^{}", wrap(format!("{a},{b}"))),
        // The superscript range uses a single hyphen.
        CitationForm::UpRange => format!("^{}", wrap(format!("{a}-{b}"))),
        CitationForm::Label => String::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cite_all(labels: &[&str]) -> (CitationState, LabelTable, Vec<u64>) {
        let mut state = CitationState::new(true);
        let mut table = LabelTable::new();
        let mut bank = CounterBank::default();
        let style = CitationStyle::default();
        let nums = labels
            .iter()
            .map(|l| state.cite_number(&mut table, &mut bank, l, &style))
            .collect();
        (state, table, nums)
    }

    #[test]
    fn first_use_order() {
        let (_, _, nums) = cite_all(&["b", "a", "b"]);
        assert_eq!(nums, vec![1, 2, 1]);
    }

    #[test]
    fn preset_offsets_numbers() {
        let mut state = CitationState::new(false);
        let mut table = LabelTable::new();
        let mut bank = CounterBank::default();
        bank.preset(crate::parser::PresetCounter::Citation, 10)
            .unwrap();
        let n = state.cite_number(&mut table, &mut bank, "x", &CitationStyle::default());
        assert_eq!(n, 11);
    }

    #[test]
    fn clabel_numbers_at_its_position() {
        let mut state = CitationState::new(true);
        let mut table = LabelTable::new();
        let mut bank = CounterBank::default();
        let style = CitationStyle::default();
        state.cite_number(&mut table, &mut bank, "a", &style);
        assert_eq!(state.clabel(&mut table, &mut bank, "x", &style), 2);
        assert_eq!(state.cite_number(&mut table, &mut bank, "x", &style), 2);
    }

    #[test]
    fn clabel_twice_reports_redefinition() {
        let mut state = CitationState::new(true);
        let mut table = LabelTable::new();
        let mut bank = CounterBank::default();
        let style = CitationStyle::default();
        state.define_bibitem("x", "X text");
        state.clabel(&mut table, &mut bank, "x", &style);
        assert_eq!(state.clabel(&mut table, &mut bank, "x", &style), 2);
        let bib = state.emit_bibliography();
        assert_eq!(
            bib.file,
            "\\item{[1]} X text\n\n\\item{?? [2]} ??? tentativo di ridefinire la citazione x !!!\n"
        );
        assert_eq!(
            bib.block[1],
            "?? [2] ??? tentativo di ridefinire la citazione x !!!"
        );
    }

    #[test]
    fn bib_text_fallback() {
        let mut state = CitationState::new(true);
        state.define_bibitem("K1", "Knuth");
        assert_eq!(state.bib_text("K1"), ("Knuth".to_string(), None));
        let (text, warn) = state.bib_text("nope");
        assert_eq!(text, " ??");
        assert_eq!(warn.unwrap().message, " ??? biblitem nope indefinito !!!");
        assert_eq!(state.bib_text("nope"), (" ??".to_string(), None));
    }

    #[test]
    fn late_biblitem_is_found_at_emission() {
        let (mut state, _, _) = cite_all(&["k"]);
        state.define_bibitem("k", "Later text");
        let bib = state.emit_bibliography();
        assert_eq!(bib.file, "\\item{[1]} Later text\n");
        assert!(bib.diagnostics.is_empty());
    }

    #[test]
    fn bibliography_in_citation_order() {
        let (mut state, _, _) = cite_all(&["b", "a"]);
        state.define_bibitem("a", "A text");
        state.define_bibitem("b", "B text");
        let bib = state.emit_bibliography();
        assert_eq!(bib.file, "\\item{[1]} B text\n\n\\item{[2]} A text\n");
        assert_eq!(bib.block, vec!["[1] B text", "[2] A text"]);
    }

    #[test]
    fn empty_bibliography() {
        let bib = CitationState::new(true).emit_bibliography();
        assert_eq!(bib, Bibliography::default());
    }

    #[test]
    fn rendering_forms() {
        let s = CitationStyle::default();
        assert_eq!(
            render_citation(CitationForm::Single, &[3], &s).unwrap(),
            "[3]"
        );
        assert_eq!(
            render_citation(CitationForm::Pair, &[1, 2], &s).unwrap(),
            "[1,2]"
        );
        assert_eq!(
            render_citation(CitationForm::Range, &[2, 5], &s).unwrap(),
            "[2--5]"
        );
        assert_eq!(
            render_citation(CitationForm::UpRange, &[2, 5], &s).unwrap(),
            "^[2-5]"
        );
        assert_eq!(
            render_citation(CitationForm::UpSingle, &[4], &s).unwrap(),
            "^[4]"
        );
        assert_eq!(render_citation(CitationForm::Bare, &[4], &s).unwrap(), "4");
        assert_eq!(
            render_citation(CitationForm::UpBare, &[4], &s).unwrap(),
            "^4"
        );
        let paren = CitationStyle {
            cite_left: "(".into(),
            cite_right: ")".into(),
            ..s.clone()
        };
        assert_eq!(
            render_citation(CitationForm::Single, &[3], &paren).unwrap(),
            "(3)"
        );
        assert!(render_citation(CitationForm::Range, &[1], &s).is_err());
    }
}
