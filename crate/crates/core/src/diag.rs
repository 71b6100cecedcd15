//! Console diagnostics.
//!
//! Every message the engine prints is built here so the byte layout of each
//! template lives in exactly one place. The Italian templates reproduce the
//! strings the original macro package writes to the terminal, including
//! their leading and trailing spaces.

use std::fmt;

use crate::labels::Namespace;
use crate::parser::Position;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Severity {
    /// Progress output (`\write16` notices).
    Notice,
    Warning,
}

/// Template identifier of a diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiagnosticKind {
    DraftMode,
    SymbolsFile,
    AuxFile,
    IndexFile,
    BibFile,
    SectionPreset,
    EquationPreset,
    CitationPreset,
    SectionTitle,
    /// A label was redefined with a value different from the one it had.
    PossiblyWrongRef,
    UndefinedSref,
    UndefinedPararef,
    UndefinedEqref,
    UndefinedLemmaref,
    UndefinedBiblitem,
    NumberedBeforeSection,
    UnknownCommand,
    LateCitation,
    IndexWithoutIndice,
}

impl DiagnosticKind {
    /// True for the warnings that mean a reference could not be resolved.
    pub fn is_unresolved(self) -> bool {
        matches!(
            self,
            DiagnosticKind::UndefinedSref
                | DiagnosticKind::UndefinedPararef
                | DiagnosticKind::UndefinedEqref
                | DiagnosticKind::UndefinedLemmaref
                | DiagnosticKind::UndefinedBiblitem
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagnostic {
    pub severity: Severity,
    pub kind: DiagnosticKind,
    pub label: Option<String>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn notice(kind: DiagnosticKind, message: String) -> Diagnostic {
    Diagnostic {
        severity: Severity::Notice,
        kind,
        label: None,
        message,
    }
}

fn warning(kind: DiagnosticKind, label: &str, message: String) -> Diagnostic {
    Diagnostic {
        severity: Severity::Warning,
        kind,
        label: Some(label.to_string()),
        message,
    }
}

impl Diagnostic {
    pub fn draft_mode() -> Self {
        notice(
            DiagnosticKind::DraftMode,
            "!!! INSERISCE NOME EQUAZIONI !!!".to_string(),
        )
    }

    pub fn symbols_file(jobname: &str) -> Self {
        notice(
            DiagnosticKind::SymbolsFile,
            format!(" !!! Genera il file {jobname}.SMB "),
        )
    }

    pub fn aux_file(jobname: &str) -> Self {
        notice(
            DiagnosticKind::AuxFile,
            format!(" !!! Genera il file {jobname}.aux "),
        )
    }

    pub fn index_file(jobname: &str) -> Self {
        notice(
            DiagnosticKind::IndexFile,
            format!("Genera il file {jobname}.ind"),
        )
    }

    pub fn bib_file(jobname: &str) -> Self {
        notice(
            DiagnosticKind::BibFile,
            format!(" !!! Genera il file {jobname}.BIB"),
        )
    }

    pub fn section_preset(n: u64) -> Self {
        notice(
            DiagnosticKind::SectionPreset,
            format!(" !!! sez-preset = {n} "),
        )
    }

    pub fn equation_preset(n: u64) -> Self {
        notice(
            DiagnosticKind::EquationPreset,
            format!(" !!! eq-preset = {n} "),
        )
    }

    pub fn citation_preset(n: u64) -> Self {
        notice(
            DiagnosticKind::CitationPreset,
            format!(" !!! cit-preset = {n} "),
        )
    }

    /// Progress line printed when a section starts: `<number>. <title>`, or
    /// the bare title for manually designated sections.
    pub fn section_title(number: Option<&str>, title: &str) -> Self {
        let message = match number {
            Some(n) => format!("{n}. {title}"),
            None => title.to_string(),
        };
        notice(DiagnosticKind::SectionTitle, message)
    }

    /// Drift warning for a label whose value changed.
    pub fn possibly_wrong_ref(ns: Namespace, label: &str) -> Self {
        // The paragraph variant has no leading space in the macro source.
        let message = match ns {
            Namespace::Paragraph => {
                format!("??? possibili riferimenti errati a \\pararef{{{label}}} !!!")
            }
            _ => format!(
                " ??? possibili riferimenti errati a \\{}{{{label}}} !!!",
                ns.ref_command()
            ),
        };
        warning(DiagnosticKind::PossiblyWrongRef, label, message)
    }

    pub fn undefined_sref(label: &str) -> Self {
        warning(
            DiagnosticKind::UndefinedSref,
            label,
            format!(" ??? \\sref{{{label}}} non definita !!!"),
        )
    }

    pub fn undefined_pararef(label: &str) -> Self {
        warning(
            DiagnosticKind::UndefinedPararef,
            label,
            format!("??? \\pararef{{{label}}} non definito !!!"),
        )
    }

    pub fn undefined_eqref(label: &str) -> Self {
        warning(
            DiagnosticKind::UndefinedEqref,
            label,
            format!(" ??? \\eqref{{{label}}} non definita !!!"),
        )
    }

    pub fn undefined_lemmaref(label: &str) -> Self {
        warning(
            DiagnosticKind::UndefinedLemmaref,
            label,
            format!(" ??? \\lemmaref{{{label}}} non definita !!!"),
        )
    }

    pub fn undefined_biblitem(label: &str) -> Self {
        warning(
            DiagnosticKind::UndefinedBiblitem,
            label,
            format!(" ??? biblitem {label} indefinito !!!"),
        )
    }

    pub fn numbered_before_section(command: &str, label: &str, prefix: &str) -> Self {
        warning(
            DiagnosticKind::NumberedBeforeSection,
            label,
            format!(
                "warning: \\{command}{{{label}}} numbered before any section; using section prefix {prefix}"
            ),
        )
    }

    pub fn unknown_command(name: &str, pos: Position) -> Self {
        warning(
            DiagnosticKind::UnknownCommand,
            name,
            format!("warning: {pos}: unknown command {name} kept as text"),
        )
    }

    pub fn late_citation(label: &str, number: u64) -> Self {
        warning(
            DiagnosticKind::LateCitation,
            label,
            format!(
                "warning: citation {label} [{number}] follows \\insertbibliografia and is missing from the bibliography"
            ),
        )
    }

    pub fn index_without_indice() -> Self {
        Diagnostic {
            severity: Severity::Warning,
            kind: DiagnosticKind::IndexWithoutIndice,
            label: None,
            message: "warning: \\quiindice without \\indice; nothing placed".to_string(),
        }
    }
}
