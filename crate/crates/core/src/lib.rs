//! refloom: automatic numbering and cross-references for a small TeX-like
//! command language.
//!
//! A document is tokenized and parsed once, then executed in passes. Each
//! pass numbers sections, equations, lemmas, paragraphs and citations,
//! resolves references, and writes the auxiliary artifacts (`.aux`,
//! `.smb`, `.bib`, `.ind`). Passes repeat until those artifacts stop
//! changing, which is what lets a reference precede its target.
//!
//! ```
//! use refloom::{parse_source, run_passes, MemoryStore, ModeFlags, PassConfig};
//!
//! let doc = parse_source("\\riferimentifuturi\nSee \\eqref{e}.\n\n\\autosez{s} Intro\n\n$$ x=1 \\autoeqno{e} $$\n").unwrap();
//! let flags = refloom::extract_mode_flags(&doc, ModeFlags::default());
//! let mut store = MemoryStore::default();
//! let outcome = run_passes(&doc, &PassConfig::new("doc", flags), &mut store, 4).unwrap();
//! assert_eq!(outcome.report.passes_run, 2);
//! assert!(outcome.final_pass.rendered.to_text().starts_with("See (1)."));
//! ```

pub mod auxio;
pub mod citebib;
pub mod cli;
pub mod diag;
pub mod engine;
pub mod indexer;
pub mod labels;
pub mod numbering;
pub mod parser;
pub mod renderer;

pub use auxio::{
    run_passes, ArtifactStore, ConvergenceReport, DirStore, MemoryStore, PassesOutcome,
};
pub use diag::{Diagnostic, DiagnosticKind, Severity};
pub use engine::{run_pass, PassConfig, PassInput, PassOutput};
pub use labels::{LabelTable, Namespace};
pub use parser::{extract_mode_flags, parse_document, parse_source, tokenize, Document, ModeFlags};
