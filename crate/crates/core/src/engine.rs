//! Execution of one pass over a parsed document.

use thiserror::Error;

use crate::auxio::{aux_line, parse_aux, smb_header, smb_record, AuxError, AuxRecord, SymbolKind};
use crate::citebib::{
    render_citation, Bibliography, CitationForm, CitationState, CitationStyle, CiteError,
};
use crate::diag::{Diagnostic, DiagnosticKind};
use crate::indexer::{render_index, serialize_index, IndexError, IndexKind, IndexState};
use crate::labels::{
    resolve_eqref, resolve_lemmaref, resolve_pararef, resolve_sref, DefineOutcome, LabelTable,
    Namespace,
};
use crate::numbering::{CounterBank, NumberValue, NumberingError, SectionStart};
use crate::parser::{
    BoilerplateKind, Document, EqPlacement, ModeFlags, Node, NodeKind, Position, RefKind,
    SectionKind, StyleCmd,
};
use crate::renderer::{
    qed_line, render_boilerplate, render_equation, render_heading, theorem_head, unescape_text,
    Layout, RenderedDoc,
};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Aux(#[from] AuxError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error("{pos}: {source}")]
    Numbering {
        pos: Position,
        source: NumberingError,
    },
    #[error("{pos}: {source}")]
    Citation { pos: Position, source: CiteError },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PassConfig {
    pub jobname: String,
    pub flags: ModeFlags,
    pub lines_per_page: usize,
    /// Blank pages `\quiindice` reserves while the index is generated.
    pub reserve_pages: usize,
}

impl PassConfig {
    pub fn new(jobname: &str, flags: ModeFlags) -> Self {
        PassConfig {
            jobname: jobname.to_string(),
            flags,
            lines_per_page: 40,
            reserve_pages: 2,
        }
    }
}

/// Artifacts present in the workspace when the pass starts.
#[derive(Debug, Clone, Copy, Default)]
pub struct PassInput<'a> {
    pub aux: Option<&'a str>,
    pub ind: Option<&'a str>,
}

/// A number given to a label, in document order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub ns: Namespace,
    pub label: String,
    pub value: String,
}

#[derive(Debug, Clone)]
pub struct PassOutput {
    pub rendered: RenderedDoc,
    pub diagnostics: Vec<Diagnostic>,
    pub labels: LabelTable,
    pub bank: CounterBank,
    pub assignments: Vec<Assignment>,
    /// `.aux` text; only in forward-reference mode.
    pub aux: Option<String>,
    /// `.smb` text; only in symbols mode.
    pub smb: Option<String>,
    /// `.bib` text; only in auto-bibliography mode.
    pub bib: Option<String>,
    /// `.ind` text; only when this pass generated the index.
    pub ind: Option<String>,
}

impl PassOutput {
    pub fn unresolved_count(&self) -> usize {
        self.diagnostics
            .iter()
            .filter(|d| d.kind.is_unresolved())
            .count()
    }

    pub fn drift_warning_count(&self) -> usize {
        self.diagnostics
            .iter()
            .filter(|d| d.kind == DiagnosticKind::PossiblyWrongRef)
            .count()
    }

    /// Citation label → number.
    pub fn citation_numbers(&self) -> Vec<(String, u64)> {
        self.labels
            .iter(Namespace::Citation)
            .map(|(l, v)| (l.to_string(), v.parse().unwrap_or(0)))
            .collect()
    }
}

struct Pass<'c> {
    config: &'c PassConfig,
    flags: ModeFlags,
    bank: CounterBank,
    table: LabelTable,
    cites: CitationState,
    style: CitationStyle,
    index: IndexState,
    layout: Layout,
    diags: Vec<Diagnostic>,
    smb: Vec<String>,
    aux: Vec<String>,
    assignments: Vec<Assignment>,
    bibliography: Option<Bibliography>,
}

/// Execute `doc` once.
pub fn run_pass(
    doc: &Document,
    config: &PassConfig,
    input: &PassInput<'_>,
) -> Result<PassOutput, EngineError> {
    let flags = config.flags;
    let mut pass = Pass {
        config,
        flags,
        bank: CounterBank::new(flags.double_numbering),
        table: LabelTable::new(),
        cites: CitationState::new(flags.auto_bibliography),
        style: CitationStyle::default(),
        index: IndexState::new(flags.index, input.ind)?,
        layout: Layout::new(config.lines_per_page),
        diags: Vec::new(),
        smb: Vec::new(),
        aux: Vec::new(),
        assignments: Vec::new(),
        bibliography: None,
    };
    pass.announce_modes();
    if flags.forward_refs {
        if let Some(text) = input.aux {
            for rec in parse_aux(text)? {
                pass.table.seed(rec.ns, &rec.label, &rec.value);
            }
        }
    }
    pass.exec(&doc.nodes)?;
    pass.finish()
}

impl Pass<'_> {
    fn announce_modes(&mut self) {
        let job = &self.config.jobname;
        if self.flags.draft {
            self.diags.push(Diagnostic::draft_mode());
        }
        if self.flags.symbols {
            self.diags.push(Diagnostic::symbols_file(job));
        }
        if self.flags.forward_refs {
            self.diags.push(Diagnostic::aux_file(job));
        }
        if self.flags.index {
            self.diags.push(Diagnostic::index_file(job));
        }
        if self.flags.auto_bibliography {
            self.diags.push(Diagnostic::bib_file(job));
        }
    }

    fn exec(&mut self, nodes: &[Node]) -> Result<(), EngineError> {
        for node in nodes {
            self.exec_node(node)?;
        }
        Ok(())
    }

    /// Define a label; a changed value triggers the drift warning.
    fn define(&mut self, ns: Namespace, label: &str, value: &str) {
        if self.table.define(ns, label, value) == DefineOutcome::Changed {
            self.diags.push(Diagnostic::possibly_wrong_ref(ns, label));
        }
        self.assignments.push(Assignment {
            ns,
            label: label.to_string(),
            value: value.to_string(),
        });
    }

    fn write_aux(&mut self, ns: Namespace, label: &str, value: &str) -> Result<(), EngineError> {
        if self.flags.forward_refs {
            let rec = AuxRecord {
                ns,
                label: label.to_string(),
                value: value.to_string(),
            };
            self.aux.push(aux_line(&rec)?);
        }
        Ok(())
    }

    fn write_smb(&mut self, kind: SymbolKind, value: &str, label: &str) {
        if self.flags.symbols {
            self.smb.extend(smb_record(kind, value, label));
        }
    }

    fn warn_if_unsectioned(&mut self, command: &str, label: &str) {
        if !self.bank.section_started() {
            let prefix = self.bank.current_section();
            self.diags
                .push(Diagnostic::numbered_before_section(command, label, &prefix));
        }
    }

    fn next_equation(&mut self, label: &str) -> NumberValue {
        if self.bank.double_numbering {
            self.warn_if_unsectioned("eqlabel", label);
        }
        self.bank.next_equation()
    }

    fn next_lemma(&mut self, label: &str) -> NumberValue {
        self.warn_if_unsectioned("lemmalabel", label);
        self.bank.next_lemma()
    }

    /// `\eqlabel`: number, check drift, log.
    fn equation_label(&mut self, label: &str) -> Result<NumberValue, EngineError> {
        let v = self.next_equation(label);
        self.define(Namespace::Equation, label, v.as_str());
        self.write_smb(SymbolKind::Equation, v.as_str(), label);
        self.write_aux(Namespace::Equation, label, v.as_str())?;
        Ok(v)
    }

    /// `\lemmalabel`
    fn lemma_label(&mut self, label: &str) -> Result<NumberValue, EngineError> {
        let v = self.next_lemma(label);
        self.define(Namespace::Lemma, label, v.as_str());
        self.write_smb(SymbolKind::Lemma, v.as_str(), label);
        self.write_aux(Namespace::Lemma, label, v.as_str())?;
        Ok(v)
    }

    fn draft_suffix(&self, label: &str) -> String {
        if self.flags.draft {
            format!(" [{label}]")
        } else {
            String::new()
        }
    }

    fn exec_node(&mut self, node: &Node) -> Result<(), EngineError> {
        let draft = self.flags.draft;
        match &node.kind {
            NodeKind::Mode(_) => {}
            NodeKind::Section { kind, arg, title } => self.section(*kind, arg, title)?,
            NodeKind::Equation {
                label,
                placement,
                body,
            } => {
                let v = self.equation_label(label)?;
                if *placement != EqPlacement::Silent {
                    let lines =
                        render_equation(&unescape_text(body), v.as_str(), *placement, draft, label);
                    self.layout.block(lines);
                }
            }
            NodeKind::Ref { kind, label } => {
                let text = self.reference(*kind, label)?;
                self.layout.inline(&text, node.space_before);
            }
            NodeKind::Theorem { kind, label, body } => {
                self.layout.flush();
                let v = self.lemma_label(label)?;
                let head = theorem_head(kind.display_name(), v.as_str(), draft, label);
                self.layout.open_paragraph(&head);
                self.exec(body)?;
                self.layout.flush();
            }
            NodeKind::LemmaNumber { label, visible } => {
                let v = self.lemma_label(label)?;
                if *visible {
                    let text = format!("{v}{}", self.draft_suffix(label));
                    self.layout.inline(&text, node.space_before);
                }
            }
            NodeKind::Citation { form, labels } => {
                let text = self.citation(*form, labels, node.pos)?;
                self.layout.inline(&text, node.space_before);
            }
            NodeKind::BibItem { label, text } => self.cites.define_bibitem(label, text),
            NodeKind::InsertBibliography => self.insert_bibliography(),
            NodeKind::IndexHere => self.place_index(),
            NodeKind::Preset { counter, raw } => {
                let d = self.bank.preset_raw(*counter, raw).map_err(|source| {
                    EngineError::Numbering {
                        pos: node.pos,
                        source,
                    }
                })?;
                self.diags.push(d);
            }
            NodeKind::Style(style) => match style {
                StyleCmd::CiteBrackets { left, right } => {
                    self.style.cite_left = left.clone();
                    self.style.cite_right = right.clone();
                }
                StyleCmd::BiblBrackets { left, right } => {
                    self.style.bibl_left = left.clone();
                    self.style.bibl_right = right.clone();
                }
                StyleCmd::BiblSkip(dim) => self.cites.skip = Some(dim.clone()),
            },
            NodeKind::Text(t) => self.layout.inline(&unescape_text(t), node.space_before),
            NodeKind::DisplayMath(body) => {
                self.layout.block(vec![unescape_text(body)]);
            }
            NodeKind::Qed => self.layout.block_tight(vec![qed_line()]),
            NodeKind::Boilerplate { kind, arg } => {
                let lines = render_boilerplate(*kind, arg.as_deref());
                match kind {
                    BoilerplateKind::Proof | BoilerplateKind::Abstract => {
                        self.layout.open_paragraph(&lines[0])
                    }
                    BoilerplateKind::Rivista => {
                        for l in lines {
                            self.layout.inline(&unescape_text(&l), node.space_before);
                        }
                    }
                    BoilerplateKind::Comment => {}
                    _ => {
                        self.layout.block(lines);
                    }
                }
            }
            NodeKind::Par => self.layout.flush(),
        }
        Ok(())
    }

    fn section(&mut self, kind: SectionKind, arg: &str, title: &str) -> Result<(), EngineError> {
        let draft = self.flags.draft;
        match kind {
            SectionKind::Section | SectionKind::Chapter => {
                let start = if kind == SectionKind::Chapter {
                    SectionStart::Chapter
                } else {
                    SectionStart::Auto
                };
                let cur = self.bank.begin_section(start);
                self.define(Namespace::Section, arg, &cur);
                self.diags
                    .push(Diagnostic::section_title(Some(&cur), title));
                self.write_smb(SymbolKind::Section, &cur, arg);
                self.write_aux(Namespace::Section, arg, &cur)?;
                if kind == SectionKind::Chapter {
                    self.layout.eject();
                    let page = self.layout.pages.page();
                    self.index
                        .record_entry(IndexKind::Chapter, &cur, title, page);
                }
                self.layout
                    .block(render_heading(kind, &cur, title, draft, arg));
            }
            SectionKind::Semi => {
                self.bank.begin_section(SectionStart::Semi(arg));
                self.write_smb(SymbolKind::SemiSection, "", arg);
                self.diags.push(Diagnostic::section_title(None, title));
                self.layout
                    .block(render_heading(kind, "", title, draft, arg));
            }
            SectionKind::Paragraph => {
                self.warn_if_unsectioned("autopara", arg);
                let v = self.bank.next_paragraph();
                let page = self
                    .layout
                    .block(render_heading(kind, v.as_str(), title, draft, arg));
                self.define(Namespace::Paragraph, arg, v.as_str());
                self.write_smb(SymbolKind::Paragraph, v.as_str(), arg);
                self.write_aux(Namespace::Paragraph, arg, v.as_str())?;
                self.index
                    .record_entry(IndexKind::Paragraph, v.as_str(), title, page);
            }
        }
        Ok(())
    }

    fn reference(&mut self, kind: RefKind, label: &str) -> Result<String, EngineError> {
        let forward = self.flags.forward_refs;
        let text = match kind {
            RefKind::Sref => {
                let (text, warn) = resolve_sref(&mut self.table, label);
                self.diags.extend(warn);
                text
            }
            RefKind::Pararef => {
                let (text, warn) = resolve_pararef(&mut self.table, label);
                self.diags.extend(warn);
                text
            }
            RefKind::Eqref | RefKind::Eqsref => {
                let r = resolve_eqref(&mut self.table, &mut self.bank, label, forward);
                self.diags.extend(r.warning);
                if r.assigned.is_some() && self.bank.double_numbering {
                    self.warn_if_unsectioned("eqlabel", label);
                }
                self.after_fallback(Namespace::Equation, label, r.assigned.as_ref());
                r.text
            }
            RefKind::Lemmaref => {
                let r = resolve_lemmaref(&mut self.table, &mut self.bank, label, forward);
                self.diags.extend(r.warning);
                if r.assigned.is_some() {
                    self.warn_if_unsectioned("lemmalabel", label);
                }
                self.after_fallback(Namespace::Lemma, label, r.assigned.as_ref());
                r.text
            }
        };
        Ok(match kind {
            RefKind::Eqref => format!("({text})"),
            _ => text,
        })
    }

    /// Bookkeeping for a number consumed by an undefined-reference fallback.
    fn after_fallback(&mut self, ns: Namespace, label: &str, assigned: Option<&NumberValue>) {
        if let Some(v) = assigned {
            self.assignments.push(Assignment {
                ns,
                label: label.to_string(),
                value: v.to_string(),
            });
            let kind = if ns == Namespace::Equation {
                SymbolKind::Equation
            } else {
                SymbolKind::Lemma
            };
            self.write_smb(kind, v.as_str(), label);
        }
    }

    fn citation(
        &mut self,
        form: CitationForm,
        labels: &[String],
        pos: Position,
    ) -> Result<String, EngineError> {
        let before = self.cites.entries.len();
        let mut numbers = Vec::with_capacity(labels.len());
        for label in labels {
            let n = if form == CitationForm::Label {
                self.cites
                    .clabel(&mut self.table, &mut self.bank, label, &self.style)
            } else {
                self.cites
                    .cite_number(&mut self.table, &mut self.bank, label, &self.style)
            };
            numbers.push(n);
        }
        if self.bibliography.is_some() {
            // The bibliography file is already closed.
            for e in self.cites.entries.drain(before..) {
                self.diags
                    .push(Diagnostic::late_citation(&e.label, e.number));
            }
        }
        render_citation(form, &numbers, &self.style)
            .map_err(|source| EngineError::Citation { pos, source })
    }

    fn insert_bibliography(&mut self) {
        if !self.flags.auto_bibliography {
            return;
        }
        if self.bibliography.is_none() {
            let page = self.layout.next_block_page();
            self.index
                .record_entry(IndexKind::Bibliography, "", "Bibliografia", page);
            let bib = self.cites.emit_bibliography();
            self.diags.extend(bib.diagnostics.iter().cloned());
            self.bibliography = Some(bib);
        }
        let block = self
            .bibliography
            .as_ref()
            .map(|b| b.block.clone())
            .unwrap_or_default();
        self.layout.block(block);
    }

    fn place_index(&mut self) {
        if !self.flags.index {
            self.diags.push(Diagnostic::index_without_indice());
            return;
        }
        let reserve = self.config.reserve_pages;
        self.layout.eject();
        match self.index.loaded.clone() {
            Some(entries) => {
                let start = self.layout.pages.line;
                self.layout.block(render_index(&entries));
                self.layout.eject();
                self.layout.pages.pad_from(start, reserve);
            }
            None => {
                let page = self.layout.pages.page();
                self.index
                    .record_entry(IndexKind::Index, "", "Indice", page);
                for _ in 0..reserve {
                    self.layout.blank_page();
                }
            }
        }
    }

    fn finish(mut self) -> Result<PassOutput, EngineError> {
        let flags = self.flags;
        let bib = if flags.auto_bibliography {
            let bib = match self.bibliography.take() {
                Some(b) => b,
                None => {
                    let b = self.cites.emit_bibliography();
                    self.diags.extend(b.diagnostics.iter().cloned());
                    b
                }
            };
            Some(bib.file)
        } else {
            None
        };
        let aux = flags
            .forward_refs
            .then(|| self.aux.iter().map(|l| format!("{l}\n")).collect());
        let smb = flags.symbols.then(|| {
            let mut s = smb_header(&self.config.jobname);
            s.push('\n');
            for l in &self.smb {
                s.push_str(l);
                s.push('\n');
            }
            s
        });
        let ind = self
            .index
            .generating()
            .then(|| serialize_index(&self.index.entries));
        Ok(PassOutput {
            rendered: self.layout.finish(),
            diagnostics: self.diags,
            labels: self.table,
            bank: self.bank,
            assignments: self.assignments,
            aux,
            smb,
            bib,
            ind,
        })
    }
}
