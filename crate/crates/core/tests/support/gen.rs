//! Random documents over the oracle's command set, emitted both as source
//! text and as the command list the oracle interprets.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use super::oracle::{Cmd, Flags};

pub struct Generated {
    pub source: String,
    pub cmds: Vec<Cmd>,
    pub flags: Flags,
}

const WORDS: [&str; 6] = ["Alpha", "Beta", "Gamma", "Delta", "Widgets", "Results"];

fn pick(rng: &mut StdRng, prefix: &str, pool: u32) -> String {
    format!("{prefix}{}", rng.gen_range(1..=pool))
}

fn title(rng: &mut StdRng) -> String {
    let n = rng.gen_range(1..=3);
    (0..n)
        .map(|_| *WORDS.choose(rng).unwrap())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn random_cmd(rng: &mut StdRng) -> Cmd {
    match rng.gen_range(0..14) {
        0 => Cmd::Sez(pick(rng, "s", 4), title(rng)),
        1 => Cmd::Semi(
            ["A", "B", "App"].choose(rng).unwrap().to_string(),
            title(rng),
        ),
        2 | 3 => Cmd::Eq(pick(rng, "e", 6)),
        4 => Cmd::EqRef(pick(rng, "e", 6)),
        5 => Cmd::Thm(pick(rng, "t", 4)),
        6 => Cmd::LemmaRef(pick(rng, "t", 4)),
        7 => Cmd::Para(pick(rng, "p", 4), title(rng)),
        8 => Cmd::SRef(pick(rng, "s", 4)),
        9 => Cmd::Cite(pick(rng, "k", 5)),
        10 => Cmd::CLabel(pick(rng, "k", 5)),
        11 => Cmd::BibItem(pick(rng, "k", 5), title(rng)),
        _ => match rng.gen_range(0..3) {
            0 => Cmd::SezPreset(rng.gen_range(0..6)),
            1 => Cmd::EqPreset(rng.gen_range(0..6)),
            _ => Cmd::CitPreset(rng.gen_range(0..6)),
        },
    }
}

pub fn cmd_source(cmd: &Cmd) -> String {
    match cmd {
        Cmd::Sez(l, t) => format!("\\autosez{{{l}}} {t}\n\n"),
        Cmd::Semi(n, t) => format!("\\semiautosez{{{n}}} {t}\n\n"),
        Cmd::Eq(l) => format!("$$ x_{{n}} = y \\autoeqno{{{l}}} $$\n"),
        Cmd::EqRef(l) => format!("see \\eqref{{{l}}}\n"),
        Cmd::Thm(l) => format!("\\theorem{{{l}}}{{Every {l} holds.}}\n"),
        Cmd::LemmaRef(l) => format!("by \\lemmaref{{{l}}}\n"),
        Cmd::Para(l, t) => format!("\\autopara{{{l}}} {t}\n\n"),
        Cmd::SRef(l) => format!("in \\sref{{{l}}}\n"),
        Cmd::Cite(l) => format!("\\cite{{{l}}}\n"),
        Cmd::CLabel(l) => format!("\\clabel{{{l}}}\n"),
        Cmd::BibItem(l, t) => format!("\\biblitem{{{l}}} {t}\n\n"),
        Cmd::SezPreset(n) => format!("\\sezpreset{{{n}}}\n"),
        Cmd::EqPreset(n) => format!("\\eqpreset{{{n}}}\n"),
        Cmd::CitPreset(n) => format!("\\citpreset{{{n}}}\n"),
    }
}

pub fn render(cmds: &[Cmd], flags: Flags) -> String {
    let mut src = String::new();
    for (on, name) in [
        (flags.forward, "\\riferimentifuturi\n"),
        (flags.double, "\\numerazionedoppia\n"),
        (flags.autobib, "\\autobibliografia\n"),
        (flags.symbols, "\\simboli\n"),
    ] {
        if on {
            src.push_str(name);
        }
    }
    src.push('\n');
    for c in cmds {
        src.push_str(&cmd_source(c));
    }
    src
}

pub fn random_flags(rng: &mut StdRng) -> Flags {
    Flags {
        forward: rng.gen(),
        double: rng.gen(),
        autobib: rng.gen(),
        symbols: rng.gen(),
    }
}

/// A document of at most `max_cmds` commands.
pub fn document(rng: &mut StdRng, max_cmds: usize) -> Generated {
    let flags = random_flags(rng);
    let n = rng.gen_range(0..=max_cmds);
    let cmds: Vec<Cmd> = (0..n).map(|_| random_cmd(rng)).collect();
    Generated {
        source: render(&cmds, flags),
        cmds,
        flags,
    }
}
