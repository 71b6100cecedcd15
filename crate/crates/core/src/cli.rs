//! Command-line driver.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::Parser;

use crate::auxio::{run_passes, ArtifactNames, ArtifactStore, DirStore, DEFAULT_MAX_PASSES};
use crate::engine::PassConfig;
use crate::parser::{extract_mode_flags, parse_source, ModeFlags};

pub const EXIT_OK: u8 = 0;
/// Unresolved references remain, or the passes did not converge.
pub const EXIT_UNRESOLVED: u8 = 1;
/// Unreadable input, parse errors, malformed artifacts.
pub const EXIT_ERROR: u8 = 2;

#[derive(Debug, Clone, Parser)]
#[command(
    name = "refloom",
    version,
    about = "Number sections, equations and citations and resolve references across passes"
)]
pub struct CliConfig {
    /// Source document.
    pub input: PathBuf,
    /// Base name of the auxiliary files (default: input file stem).
    #[arg(long)]
    pub jobname: Option<String>,
    /// Write the rendered document here instead of stdout.
    #[arg(long = "out")]
    pub out_path: Option<PathBuf>,
    /// Annotate numbers with their labels.
    #[arg(long)]
    pub draft: bool,
    /// Write the `<jobname>.smb` symbol log.
    #[arg(long)]
    pub symbols: bool,
    /// Read and write `<jobname>.aux` so references may precede their targets.
    #[arg(long)]
    pub forward_refs: bool,
    /// Generate the `<jobname>.ind` index.
    #[arg(long)]
    pub index: bool,
    /// Number equations per section (`S.k`).
    #[arg(long)]
    pub double_numbering: bool,
    /// Generate `<jobname>.bib` in citation order.
    #[arg(long)]
    pub auto_bib: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_PASSES, value_parser = positive)]
    pub max_passes: usize,
    #[arg(long, default_value_t = 40, value_parser = positive)]
    pub lines_per_page: usize,
    /// Blank pages reserved for the index while it is generated.
    #[arg(long, default_value_t = 2)]
    pub reserve_pages: usize,
    /// Directory for auxiliary files (default: the input's directory).
    #[arg(long = "workspace")]
    pub workspace_dir: Option<PathBuf>,
    /// Delete existing auxiliary files before running.
    #[arg(long)]
    pub clean: bool,
}

impl CliConfig {
    pub fn new(input: impl Into<PathBuf>) -> Self {
        CliConfig {
            input: input.into(),
            jobname: None,
            out_path: None,
            draft: false,
            symbols: false,
            forward_refs: false,
            index: false,
            double_numbering: false,
            auto_bib: false,
            max_passes: DEFAULT_MAX_PASSES,
            lines_per_page: 40,
            reserve_pages: 2,
            workspace_dir: None,
            clean: false,
        }
    }

    pub fn jobname(&self) -> String {
        self.jobname.clone().unwrap_or_else(|| {
            self.input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "refloom".to_string())
        })
    }

    pub fn workspace(&self) -> PathBuf {
        match &self.workspace_dir {
            Some(d) => d.clone(),
            None => match self.input.parent() {
                Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
                _ => PathBuf::from("."),
            },
        }
    }

    fn overrides(&self) -> ModeFlags {
        ModeFlags {
            draft: self.draft,
            symbols: self.symbols,
            forward_refs: self.forward_refs,
            double_numbering: self.double_numbering,
            index: self.index,
            auto_bibliography: self.auto_bib,
        }
    }
}

/// Run the whole pipeline; diagnostics go to `stderr`. Returns the exit code.
pub fn run(config: &CliConfig, stderr: &mut dyn Write) -> u8 {
    match run_inner(config, stderr) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(stderr, "refloom: {msg}");
            EXIT_ERROR
        }
    }
}

fn run_inner(config: &CliConfig, stderr: &mut dyn Write) -> Result<u8, String> {
    let source = fs::read_to_string(&config.input)
        .map_err(|e| format!("cannot read {}: {e}", config.input.display()))?;
    let doc = parse_source(&source).map_err(|e| format!("{}:{e}", config.input.display()))?;
    for w in &doc.warnings {
        writeln!(stderr, "{w}").map_err(io_err)?;
    }

    let jobname = config.jobname();
    let flags = extract_mode_flags(&doc, config.overrides());
    let mut store = DirStore::new(config.workspace());
    if config.clean {
        for name in ArtifactNames::new(&jobname).all() {
            store.remove(name).map_err(io_err)?;
        }
    }

    let pass_config = PassConfig {
        jobname,
        flags,
        lines_per_page: config.lines_per_page,
        reserve_pages: config.reserve_pages,
    };
    let outcome =
        run_passes(&doc, &pass_config, &mut store, config.max_passes).map_err(|e| e.to_string())?;
    for diags in &outcome.pass_diagnostics {
        for d in diags {
            writeln!(stderr, "{d}").map_err(io_err)?;
        }
    }

    let text = outcome.final_pass.rendered.to_text();
    match &config.out_path {
        Some(path) => write_if_changed(path, &text).map_err(io_err)?,
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(io_err)?,
    }

    let report = outcome.report;
    log::info!(
        "{} pass(es), converged: {}",
        report.passes_run,
        report.converged
    );
    if !report.converged {
        writeln!(
            stderr,
            "refloom: not converged after {} passes",
            report.passes_run
        )
        .map_err(io_err)?;
        return Ok(EXIT_UNRESOLVED);
    }
    if outcome.final_pass.unresolved_count() > 0 {
        return Ok(EXIT_UNRESOLVED);
    }
    Ok(EXIT_OK)
}

fn write_if_changed(path: &Path, text: &str) -> io::Result<()> {
    if fs::read_to_string(path).ok().as_deref() == Some(text) {
        return Ok(());
    }
    fs::write(path, text)
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("expected a positive integer, got `{s}`")),
    }
}

fn io_err(e: io::Error) -> String {
    e.to_string()
}
