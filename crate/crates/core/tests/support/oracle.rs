//! Direct interpreter of the numbering and reference rules, written without
//! reference to the library so the two can be compared.

use std::collections::{BTreeMap, HashMap, HashSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ns {
    S,
    Ap,
    Eq,
    Lm,
    C,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cmd {
    Sez(String, String),
    Semi(String, String),
    Eq(String),
    EqRef(String),
    Thm(String),
    LemmaRef(String),
    Para(String, String),
    SRef(String),
    Cite(String),
    CLabel(String),
    BibItem(String, String),
    SezPreset(u64),
    EqPreset(u64),
    CitPreset(u64),
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Flags {
    pub forward: bool,
    pub double: bool,
    pub autobib: bool,
    pub symbols: bool,
}

#[derive(Debug, Clone, Default)]
pub struct PassResult {
    pub labels: BTreeMap<(Ns, String), String>,
    /// Sorted diagnostic messages.
    pub diagnostics: Vec<String>,
    /// Final value of every label defined with a number this pass.
    pub aux: BTreeMap<(Ns, String), String>,
}

struct State<'a> {
    job: &'a str,
    flags: Flags,
    sect: u64,
    eq: u64,
    lemm: u64,
    para: u64,
    cit: u64,
    cur: Option<String>,
    labels: BTreeMap<(Ns, String), String>,
    aux: BTreeMap<(Ns, String), String>,
    /// (label, is_redefinition) in bibliography order.
    bib: Vec<(String, bool)>,
    texts: HashMap<String, String>,
    diags: Vec<String>,
}

fn ref_name(ns: Ns) -> &'static str {
    match ns {
        Ns::S => "sref",
        Ns::Ap => "pararef",
        Ns::Eq => "eqref",
        Ns::Lm => "lemmaref",
        Ns::C => "cref",
    }
}

impl State<'_> {
    fn prefix(&self) -> String {
        self.cur.clone().unwrap_or_else(|| self.sect.to_string())
    }

    fn unsectioned(&mut self, cmd: &str, label: &str) {
        if self.cur.is_none() {
            let p = self.prefix();
            self.diags.push(format!(
                "warning: \\{cmd}{{{label}}} numbered before any section; using section prefix {p}"
            ));
        }
    }

    fn set(&mut self, ns: Ns, label: &str, value: String) {
        let key = (ns, label.to_string());
        if let Some(old) = self.labels.get(&key) {
            if *old != value {
                let lead = if ns == Ns::Ap { "" } else { " " };
                self.diags.push(format!(
                    "{lead}??? possibili riferimenti errati a \\{}{{{label}}} !!!",
                    ref_name(ns)
                ));
            }
        }
        self.labels.insert(key.clone(), value.clone());
        if self.flags.forward {
            self.aux.insert(key, value);
        }
    }

    fn new_eq(&mut self, label: &str) -> String {
        if self.flags.double {
            self.unsectioned("eqlabel", label);
        }
        self.eq += 1;
        if self.flags.double {
            format!("{}.{}", self.prefix(), self.eq)
        } else {
            self.eq.to_string()
        }
    }

    fn new_lemma(&mut self, label: &str) -> String {
        self.unsectioned("lemmalabel", label);
        self.lemm += 1;
        format!("{}.{}", self.prefix(), self.lemm)
    }

    fn has(&self, ns: Ns, label: &str) -> bool {
        self.labels.contains_key(&(ns, label.to_string()))
    }

    fn cite(&mut self, label: &str, redefine: bool) {
        if self.has(Ns::C, label) && !redefine {
            return;
        }
        let again = self.has(Ns::C, label);
        self.cit += 1;
        self.labels
            .insert((Ns::C, label.to_string()), self.cit.to_string());
        if self.flags.autobib {
            self.bib.push((label.to_string(), again));
        }
    }

    fn numbered_ref(&mut self, ns: Ns, label: &str) {
        if self.has(ns, label) {
            return;
        }
        self.diags.push(format!(
            " ??? \\{}{{{label}}} non definita !!!",
            ref_name(ns)
        ));
        if self.flags.forward {
            return;
        }
        let v = if ns == Ns::Eq {
            self.new_eq(label)
        } else {
            self.new_lemma(label)
        };
        // Fallback numbers are stored but never written to the aux file.
        self.labels.insert((ns, label.to_string()), v);
    }

    fn exec(&mut self, cmd: &Cmd) {
        match cmd {
            Cmd::Sez(label, title) => {
                self.sect += 1;
                self.lemm = 0;
                self.para = 0;
                if self.flags.double {
                    self.eq = 0;
                }
                let s = self.sect.to_string();
                self.cur = Some(s.clone());
                self.set(Ns::S, label, s.clone());
                self.diags.push(format!("{s}. {title}"));
            }
            Cmd::Semi(name, title) => {
                if self.flags.double {
                    self.eq = 0;
                }
                self.cur = Some(name.clone());
                self.diags.push(title.clone());
            }
            Cmd::Eq(label) => {
                let v = self.new_eq(label);
                self.set(Ns::Eq, label, v);
            }
            Cmd::Thm(label) => {
                let v = self.new_lemma(label);
                self.set(Ns::Lm, label, v);
            }
            Cmd::Para(label, _) => {
                self.unsectioned("autopara", label);
                self.para += 1;
                let v = format!("{}.{}", self.prefix(), self.para);
                self.set(Ns::Ap, label, v);
            }
            Cmd::EqRef(label) => self.numbered_ref(Ns::Eq, label),
            Cmd::LemmaRef(label) => self.numbered_ref(Ns::Lm, label),
            Cmd::SRef(label) => {
                if !self.has(Ns::S, label) {
                    self.diags
                        .push(format!(" ??? \\sref{{{label}}} non definita !!!"));
                    self.labels.insert((Ns::S, label.clone()), "??".into());
                }
            }
            Cmd::Cite(label) => self.cite(label, false),
            Cmd::CLabel(label) => self.cite(label, true),
            Cmd::BibItem(label, text) => {
                self.texts.insert(label.clone(), text.clone());
            }
            Cmd::SezPreset(n) => {
                self.sect = *n;
                self.diags.push(format!(" !!! sez-preset = {n} "));
            }
            Cmd::EqPreset(n) => {
                self.eq = *n;
                self.diags.push(format!(" !!! eq-preset = {n} "));
            }
            Cmd::CitPreset(n) => {
                self.cit = *n;
                self.diags.push(format!(" !!! cit-preset = {n} "));
            }
        }
    }

    fn finish(mut self) -> PassResult {
        let mut warned = HashSet::new();
        for (label, redefinition) in std::mem::take(&mut self.bib) {
            if !redefinition && !self.texts.contains_key(&label) && warned.insert(label.clone()) {
                self.diags
                    .push(format!(" ??? biblitem {label} indefinito !!!"));
            }
        }
        self.diags.sort();
        PassResult {
            labels: self.labels,
            diagnostics: self.diags,
            aux: self.aux,
        }
    }
}

/// One pass, seeded from the previous pass's aux values.
pub fn run_pass(
    cmds: &[Cmd],
    flags: Flags,
    job: &str,
    seed: &BTreeMap<(Ns, String), String>,
) -> PassResult {
    let mut st = State {
        job,
        flags,
        sect: 0,
        eq: 0,
        lemm: 0,
        para: 0,
        cit: 0,
        cur: None,
        labels: if flags.forward {
            seed.clone()
        } else {
            BTreeMap::new()
        },
        aux: BTreeMap::new(),
        bib: Vec::new(),
        texts: HashMap::new(),
        diags: Vec::new(),
    };
    if flags.symbols {
        st.diags
            .push(format!(" !!! Genera il file {}.SMB ", st.job));
    }
    if flags.forward {
        st.diags
            .push(format!(" !!! Genera il file {}.aux ", st.job));
    }
    if flags.autobib {
        st.diags.push(format!(" !!! Genera il file {}.BIB", st.job));
    }
    for c in cmds {
        st.exec(c);
    }
    st.finish()
}

/// Up to two passes: a second one only in forward-reference mode.
pub fn interpret(cmds: &[Cmd], flags: Flags, job: &str) -> Vec<PassResult> {
    let first = run_pass(cmds, flags, job, &BTreeMap::new());
    if !flags.forward || first.aux.is_empty() {
        return vec![first];
    }
    let second = run_pass(cmds, flags, job, &first.aux);
    vec![first, second]
}
