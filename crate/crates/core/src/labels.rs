//! Label namespaces, the drift-detecting define, and reference fallbacks.
//!
//! Undefined references do not all behave alike. `\sref` stores `??` and
//! goes quiet, `\pararef` stores the label text itself, and `\eqref` /
//! `\lemmaref` either consume a fresh number or, in forward-reference mode,
//! leave the label undefined so every later use warns again.

use std::collections::BTreeMap;
use std::fmt;

use crate::diag::Diagnostic;
use crate::numbering::{CounterBank, NumberValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Namespace {
    /// `s`: sections
    Section,
    /// `ap`: paragraphs
    Paragraph,
    /// `eq`: equations
    Equation,
    /// `lm`: lemmas and theorem-like blocks
    Lemma,
    /// `c`: citations
    Citation,
}

impl Namespace {
    pub const ALL: [Namespace; 5] = [
        Namespace::Section,
        Namespace::Paragraph,
        Namespace::Equation,
        Namespace::Lemma,
        Namespace::Citation,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Namespace::Section => "s",
            Namespace::Paragraph => "ap",
            Namespace::Equation => "eq",
            Namespace::Lemma => "lm",
            Namespace::Citation => "c",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Namespace> {
        Namespace::ALL.into_iter().find(|ns| ns.tag() == tag)
    }

    /// The command that references labels of this namespace.
    pub fn ref_command(self) -> &'static str {
        match self {
            Namespace::Section => "sref",
            Namespace::Paragraph => "pararef",
            Namespace::Equation => "eqref",
            Namespace::Lemma => "lemmaref",
            Namespace::Citation => "cref",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Namespace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefineOutcome {
    Fresh,
    Unchanged,
    /// The label held a different value; references to it may be stale.
    Changed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelEntry {
    pub value: String,
    /// Loaded from the aux file rather than defined in this pass.
    pub seeded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabelTable {
    maps: [BTreeMap<String, LabelEntry>; 5],
}

impl LabelTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, ns: Namespace, label: &str) -> Option<&str> {
        self.maps[ns.index()].get(label).map(|e| e.value.as_str())
    }

    pub fn entry(&self, ns: Namespace, label: &str) -> Option<&LabelEntry> {
        self.maps[ns.index()].get(label)
    }

    pub fn contains(&self, ns: Namespace, label: &str) -> bool {
        self.maps[ns.index()].contains_key(label)
    }

    /// Bind `label`, reporting how the binding relates to any previous one.
    pub fn define(&mut self, ns: Namespace, label: &str, value: &str) -> DefineOutcome {
        let entry = LabelEntry {
            value: value.to_string(),
            seeded: false,
        };
        match self.maps[ns.index()].insert(label.to_string(), entry) {
            None => DefineOutcome::Fresh,
            Some(prev) if prev.value == value => DefineOutcome::Unchanged,
            Some(_) => DefineOutcome::Changed,
        }
    }

    /// Load a binding from a previous pass.
    pub fn seed(&mut self, ns: Namespace, label: &str, value: &str) {
        let entry = LabelEntry {
            value: value.to_string(),
            seeded: true,
        };
        self.maps[ns.index()].insert(label.to_string(), entry);
    }

    /// Bindings of one namespace in label order.
    pub fn iter(&self, ns: Namespace) -> impl Iterator<Item = (&str, &str)> {
        self.maps[ns.index()]
            .iter()
            .map(|(k, v)| (k.as_str(), v.value.as_str()))
    }

    pub fn len(&self) -> usize {
        self.maps.iter().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Label → value per namespace, without the seeded markers.
    pub fn snapshot(&self) -> BTreeMap<(Namespace, String), String> {
        let mut out = BTreeMap::new();
        for ns in Namespace::ALL {
            for (label, value) in self.iter(ns) {
                out.insert((ns, label.to_string()), value.to_string());
            }
        }
        out
    }
}

/// Result of resolving an `\eqref` or `\lemmaref`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub text: String,
    pub warning: Option<Diagnostic>,
    /// Number consumed by the fallback definition, if one happened.
    pub assigned: Option<NumberValue>,
}

pub fn resolve_sref(table: &mut LabelTable, label: &str) -> (String, Option<Diagnostic>) {
    if let Some(v) = table.get(Namespace::Section, label) {
        return (v.to_string(), None);
    }
    table.define(Namespace::Section, label, "??");
    ("??".to_string(), Some(Diagnostic::undefined_sref(label)))
}

pub fn resolve_pararef(table: &mut LabelTable, label: &str) -> (String, Option<Diagnostic>) {
    if let Some(v) = table.get(Namespace::Paragraph, label) {
        return (v.to_string(), None);
    }
    // The fallback value is the label text itself.
    table.define(Namespace::Paragraph, label, label);
    (
        label.to_string(),
        Some(Diagnostic::undefined_pararef(label)),
    )
}

/// Resolve `\eqsref` (the bare form of `\eqref`).
pub fn resolve_eqref(
    table: &mut LabelTable,
    bank: &mut CounterBank,
    label: &str,
    forward_refs: bool,
) -> Resolution {
    resolve_numbered(table, bank, label, forward_refs, Namespace::Equation)
}

pub fn resolve_lemmaref(
    table: &mut LabelTable,
    bank: &mut CounterBank,
    label: &str,
    forward_refs: bool,
) -> Resolution {
    resolve_numbered(table, bank, label, forward_refs, Namespace::Lemma)
}

fn resolve_numbered(
    table: &mut LabelTable,
    bank: &mut CounterBank,
    label: &str,
    forward_refs: bool,
    ns: Namespace,
) -> Resolution {
    if let Some(v) = table.get(ns, label) {
        return Resolution {
            text: v.to_string(),
            warning: None,
            assigned: None,
        };
    }
    let warning = Some(match ns {
        Namespace::Equation => Diagnostic::undefined_eqref(label),
        _ => Diagnostic::undefined_lemmaref(label),
    });
    if forward_refs {
        return Resolution {
            text: String::new(),
            warning,
            assigned: None,
        };
    }
    let value = match ns {
        Namespace::Equation => bank.next_equation(),
        _ => bank.next_lemma(),
    };
    // The label is absent here, so the define is always fresh.
    table.define(ns, label, value.as_str());
    Resolution {
        text: format!("???{value}"),
        warning,
        assigned: Some(value),
    }
}
