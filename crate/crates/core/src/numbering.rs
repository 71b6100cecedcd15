//! Counters and the current-section designation.

use std::fmt;

use thiserror::Error;

use crate::diag::Diagnostic;
use crate::parser::PresetCounter;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumberingError {
    #[error("preset value must be a non-negative integer, got `{0}`")]
    InvalidPreset(String),
}

/// A formatted number such as `3` or `2.5`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NumberValue(pub String);

impl NumberValue {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NumberValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<NumberValue> for String {
    fn from(v: NumberValue) -> String {
        v.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionStart<'a> {
    /// `\autosez`
    Auto,
    /// `\capitolo`
    Chapter,
    /// `\semiautosez` with its manual designation.
    Semi(&'a str),
}

/// The five counters of one pass.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CounterBank {
    pub sect: u64,
    pub eq: u64,
    pub para: u64,
    pub lemm: u64,
    pub cit: u64,
    /// `None` until the first section start; the designation then follows
    /// `sect` live, so a `\sezpreset` before any section shows through.
    current_section: Option<String>,
    pub double_numbering: bool,
}

impl CounterBank {
    pub fn new(double_numbering: bool) -> Self {
        CounterBank {
            double_numbering,
            ..Default::default()
        }
    }

    pub fn current_section(&self) -> String {
        match &self.current_section {
            Some(s) => s.clone(),
            None => self.sect.to_string(),
        }
    }

    pub fn section_started(&self) -> bool {
        self.current_section.is_some()
    }

    pub fn begin_section(&mut self, start: SectionStart<'_>) -> String {
        match start {
            SectionStart::Auto | SectionStart::Chapter => {
                self.sect += 1;
                self.lemm = 0;
                self.para = 0;
                self.current_section = Some(self.sect.to_string());
            }
            SectionStart::Semi(name) => {
                self.current_section = Some(name.to_string());
            }
        }
        if self.double_numbering {
            self.eq = 0;
        }
        self.current_section()
    }

    pub fn next_equation(&mut self) -> NumberValue {
        self.eq += 1;
        if self.double_numbering {
            NumberValue(format!("{}.{}", self.current_section(), self.eq))
        } else {
            NumberValue(self.eq.to_string())
        }
    }

    pub fn next_lemma(&mut self) -> NumberValue {
        self.lemm += 1;
        NumberValue(format!("{}.{}", self.current_section(), self.lemm))
    }

    pub fn next_paragraph(&mut self) -> NumberValue {
        self.para += 1;
        NumberValue(format!("{}.{}", self.current_section(), self.para))
    }

    pub fn next_citation(&mut self) -> u64 {
        self.cit += 1;
        self.cit
    }

    /// Set a counter so that its next increment yields `n + 1`.
    pub fn preset(&mut self, which: PresetCounter, n: i64) -> Result<Diagnostic, NumberingError> {
        let n = u64::try_from(n).map_err(|_| NumberingError::InvalidPreset(n.to_string()))?;
        Ok(match which {
            PresetCounter::Section => {
                self.sect = n;
                Diagnostic::section_preset(n)
            }
            PresetCounter::Equation => {
                self.eq = n;
                Diagnostic::equation_preset(n)
            }
            PresetCounter::Citation => {
                self.cit = n;
                Diagnostic::citation_preset(n)
            }
        })
    }

    /// Parse and apply a preset argument as written in the source.
    pub fn preset_raw(
        &mut self,
        which: PresetCounter,
        raw: &str,
    ) -> Result<Diagnostic, NumberingError> {
        let n: i64 = raw
            .trim()
            .parse()
            .map_err(|_| NumberingError::InvalidPreset(raw.to_string()))?;
        self.preset(which, n)
    }
}
