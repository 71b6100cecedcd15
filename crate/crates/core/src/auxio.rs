//! The `.aux` forward-reference file, the `.smb` symbol log, and the pass
//! driver that reruns a document until its artifacts stop changing.

use std::collections::HashMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::diag::{Diagnostic, DiagnosticKind};
use crate::engine::{run_pass, EngineError, PassConfig, PassInput, PassOutput};
use crate::labels::Namespace;
use crate::parser::Document;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AuxError {
    #[error("aux line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("aux line {line}: namespace `{tag}` is never written to the aux file")]
    NotSerialized { line: usize, tag: String },
    #[error("label `{0}` cannot be written to the aux file (contains a brace or newline)")]
    IllegalLabel(String),
}

/// One `\expandafter\edef\csname @<ns>@<label>\endcsname{<value>}` line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxRecord {
    pub ns: Namespace,
    pub label: String,
    pub value: String,
}

const AUX_PREFIX: &str = "\\expandafter\\edef\\csname @";
const AUX_MIDDLE: &str = "\\endcsname{";

fn serializable(ns: Namespace) -> bool {
    ns != Namespace::Citation
}

pub fn aux_line(rec: &AuxRecord) -> Result<String, AuxError> {
    if rec.label.contains(['{', '}', '\n']) || rec.value.contains('\n') {
        return Err(AuxError::IllegalLabel(rec.label.clone()));
    }
    if !serializable(rec.ns) {
        return Err(AuxError::NotSerialized {
            line: 0,
            tag: rec.ns.tag().to_string(),
        });
    }
    Ok(format!(
        "{AUX_PREFIX}{}@{}{AUX_MIDDLE}{}}}",
        rec.ns.tag(),
        rec.label,
        rec.value
    ))
}

/// Parse one aux line; `line_no` is only used in errors.
pub fn parse_aux_line(line: &str, line_no: usize) -> Result<AuxRecord, AuxError> {
    let malformed = |reason: &str| AuxError::Malformed {
        line: line_no,
        reason: reason.to_string(),
    };
    let rest = line
        .strip_prefix(AUX_PREFIX)
        .ok_or_else(|| malformed("expected `\\expandafter\\edef\\csname @`"))?;
    let (tag, rest) = rest
        .split_once('@')
        .ok_or_else(|| malformed("missing namespace tag"))?;
    let ns = Namespace::from_tag(tag).ok_or_else(|| malformed("unknown namespace tag"))?;
    if !serializable(ns) {
        return Err(AuxError::NotSerialized {
            line: line_no,
            tag: tag.to_string(),
        });
    }
    let (label, rest) = rest
        .split_once(AUX_MIDDLE)
        .ok_or_else(|| malformed("expected `\\endcsname{`"))?;
    if label.is_empty() || label.contains(['{', '}']) {
        return Err(malformed("bad label"));
    }
    let value = rest
        .strip_suffix('}')
        .ok_or_else(|| malformed("value must end with `}`"))?;
    Ok(AuxRecord {
        ns,
        label: label.to_string(),
        value: value.to_string(),
    })
}

/// Parse a whole aux file, skipping blank lines.
pub fn parse_aux(text: &str) -> Result<Vec<AuxRecord>, AuxError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_aux_line(l, i + 1))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    Section,
    /// A `\semiautosez` designation; the value is printed as `**`.
    SemiSection,
    Equation,
    Lemma,
    Paragraph,
}

/// The text of a symbol-log record.
pub fn smb_line(kind: SymbolKind, value: &str, label: &str) -> String {
    match kind {
        SymbolKind::Section => format!("Sezione {value} : sref. {label}"),
        SymbolKind::SemiSection => format!("Sezione ** : sref. {label}"),
        SymbolKind::Equation => format!("Equazione {value} : eqref. {label}"),
        SymbolKind::Lemma => format!("Lemma {value} : lemmaref {label}"),
        SymbolKind::Paragraph => format!("paragrafo {value} : pararef. {label}"),
    }
}

/// All lines written for one record: sections and paragraphs are framed by
/// two blank lines before and one after.
pub fn smb_record(kind: SymbolKind, value: &str, label: &str) -> Vec<String> {
    let line = smb_line(kind, value, label);
    match kind {
        SymbolKind::Equation | SymbolKind::Lemma => vec![line],
        _ => vec![String::new(), String::new(), line, String::new()],
    }
}

pub fn smb_header(jobname: &str) -> String {
    format!("Simboli di {jobname}")
}

/// Where pass artifacts live.
pub trait ArtifactStore {
    fn read(&self, name: &str) -> io::Result<Option<String>>;
    fn write(&mut self, name: &str, contents: &str) -> io::Result<()>;
    fn remove(&mut self, name: &str) -> io::Result<()>;
}

/// Artifacts as files in a directory.
#[derive(Debug, Clone)]
pub struct DirStore {
    root: PathBuf,
}

impl DirStore {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        DirStore { root: root.into() }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }
}

impl ArtifactStore for DirStore {
    fn read(&self, name: &str) -> io::Result<Option<String>> {
        match fs::read_to_string(self.path(name)) {
            Ok(s) => Ok(Some(s)),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn write(&mut self, name: &str, contents: &str) -> io::Result<()> {
        fs::write(self.path(name), contents)
    }

    fn remove(&mut self, name: &str) -> io::Result<()> {
        match fs::remove_file(self.path(name)) {
            Err(e) if e.kind() != io::ErrorKind::NotFound => Err(e),
            _ => Ok(()),
        }
    }
}

/// In-memory store, used by tests and embedders.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MemoryStore {
    pub files: HashMap<String, String>,
}

impl ArtifactStore for MemoryStore {
    fn read(&self, name: &str) -> io::Result<Option<String>> {
        Ok(self.files.get(name).cloned())
    }

    fn write(&mut self, name: &str, contents: &str) -> io::Result<()> {
        self.files.insert(name.to_string(), contents.to_string());
        Ok(())
    }

    fn remove(&mut self, name: &str) -> io::Result<()> {
        self.files.remove(name);
        Ok(())
    }
}

/// `<jobname>.<ext>` names of the four artifacts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArtifactNames {
    pub aux: String,
    pub smb: String,
    pub bib: String,
    pub ind: String,
}

impl ArtifactNames {
    pub fn new(jobname: &str) -> Self {
        ArtifactNames {
            aux: format!("{jobname}.aux"),
            smb: format!("{jobname}.smb"),
            bib: format!("{jobname}.bib"),
            ind: format!("{jobname}.ind"),
        }
    }

    pub fn all(&self) -> [&str; 4] {
        [&self.aux, &self.smb, &self.bib, &self.ind]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub passes_run: usize,
    pub converged: bool,
    pub drift_warnings_last_pass: usize,
}

#[derive(Debug)]
pub struct PassesOutcome {
    pub report: ConvergenceReport,
    pub final_pass: PassOutput,
    /// Diagnostics of every pass, in order.
    pub pass_diagnostics: Vec<Vec<Diagnostic>>,
    /// Aux text written by each pass (`None` when none was written).
    pub pass_aux: Vec<Option<String>>,
}

#[derive(Debug, Error)]
pub enum DriverError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("artifact store: {0}")]
    Io(#[from] io::Error),
}

pub const DEFAULT_MAX_PASSES: usize = 4;

/// Run passes until `.aux`, `.bib` and `.ind` are byte-identical to what the
/// previous pass (or the store, before the first pass) held.
///
/// Only forward references and the index carry information between passes,
/// so without either mode a single pass is final.
pub fn run_passes(
    doc: &Document,
    config: &PassConfig,
    store: &mut dyn ArtifactStore,
    max_passes: usize,
) -> Result<PassesOutcome, DriverError> {
    assert!(max_passes >= 1, "max_passes must be at least 1");
    let names = ArtifactNames::new(&config.jobname);
    let flags = config.flags;
    let multi_pass = flags.forward_refs || flags.index;

    let snapshot = |store: &dyn ArtifactStore| -> io::Result<[String; 3]> {
        Ok([
            store.read(&names.aux)?.unwrap_or_default(),
            store.read(&names.bib)?.unwrap_or_default(),
            store.read(&names.ind)?.unwrap_or_default(),
        ])
    };

    let mut previous = snapshot(store)?;
    let mut pass_diagnostics = Vec::new();
    let mut pass_aux = Vec::new();
    let mut passes_run = 0;
    loop {
        passes_run += 1;
        log::info!("pass {passes_run}");
        let aux = if flags.forward_refs {
            store.read(&names.aux)?
        } else {
            None
        };
        let ind = if flags.index {
            store.read(&names.ind)?
        } else {
            None
        };
        let input = PassInput {
            aux: aux.as_deref(),
            ind: ind.as_deref(),
        };
        let out = run_pass(doc, config, &input)?;

        for (name, contents) in [
            (&names.aux, &out.aux),
            (&names.smb, &out.smb),
            (&names.bib, &out.bib),
            (&names.ind, &out.ind),
        ] {
            if let Some(text) = contents {
                store.write(name, text)?;
            }
        }
        pass_diagnostics.push(out.diagnostics.clone());
        pass_aux.push(out.aux.clone());

        let current = snapshot(store)?;
        let converged = !multi_pass || current == previous;
        if converged || passes_run >= max_passes {
            let drift = out
                .diagnostics
                .iter()
                .filter(|d| d.kind == DiagnosticKind::PossiblyWrongRef)
                .count();
            return Ok(PassesOutcome {
                report: ConvergenceReport {
                    passes_run,
                    converged,
                    drift_warnings_last_pass: drift,
                },
                final_pass: out,
                pass_diagnostics,
                pass_aux,
            });
        }
        previous = current;
    }
}
