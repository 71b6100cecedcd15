//! Tokenizer and parser for the command mini-language.
//!
//! The surface syntax mirrors the macro call forms: labels are always
//! brace-delimited, and the section-like commands (`\autosez`, `\capitolo`,
//! `\semiautosez`, `\autopara`, `\biblitem`) take a trailing argument that
//! runs until the next blank line or literal `\par`. A `%` starts a comment
//! that swallows the rest of the line including its newline.

use std::fmt;

use thiserror::Error;

use crate::citebib::CitationForm;
use crate::diag::Diagnostic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{pos}: unbalanced brace: {detail}")]
    UnbalancedBrace { pos: Position, detail: &'static str },
    #[error("{pos}: {command} is missing a required {{...}} argument")]
    MissingArgument { command: String, pos: Position },
    #[error("{pos}: display math opened here is never closed")]
    UnterminatedMath { pos: Position },
    #[error("{pos}: paragraph break inside display math")]
    ParInMath { pos: Position },
    #[error("{pos}: more than one equation number in one display")]
    MultipleEqno { pos: Position },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    /// `\name`; the text includes the backslash.
    Command,
    /// `{...}`; the text is the raw content between the braces.
    Group,
    Word,
    ParBreak,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub pos: Position,
    /// Whitespace separated this token from the previous one.
    pub space_before: bool,
}

impl Token {
    /// Source form of the token with whitespace runs collapsed.
    pub fn source_text(&self) -> String {
        match self.kind {
            TokenKind::Group => format!("{{{}}}", collapse_whitespace(&self.text)),
            _ => self.text.clone(),
        }
    }
}

/// Collapse every run of whitespace to a single space and trim both ends.
pub fn collapse_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn is_blank(c: char) -> bool {
    c == ' ' || c == '\t' || c == '\r'
}

struct Scanner {
    chars: Vec<char>,
    idx: usize,
    pos: Position,
}

impl Scanner {
    fn new(src: &str, start: Position) -> Self {
        Scanner {
            chars: src.chars().collect(),
            idx: 0,
            pos: start,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.idx + offset).copied()
    }

    fn at_display_math(&self) -> bool {
        self.peek() == Some('$') && self.peek_at(1) == Some('$')
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.idx += 1;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    /// Skip a comment through the end of its line, newline included.
    fn skip_comment(&mut self) {
        while let Some(c) = self.bump() {
            if c == '\n' {
                break;
            }
        }
    }
}

/// Tokenize a whole source file.
pub fn tokenize(source: &str) -> Result<Vec<Token>, ParseError> {
    tokenize_at(source, Position { line: 1, column: 1 })
}

/// Tokenize `source` whose first character sits at `start`; used for the
/// contents of brace groups so positions stay absolute.
pub fn tokenize_at(source: &str, start: Position) -> Result<Vec<Token>, ParseError> {
    let mut sc = Scanner::new(source, start);
    let mut tokens: Vec<Token> = Vec::new();
    let mut at_line_start = true;
    let mut space = false;

    let push_par = |tokens: &mut Vec<Token>, text: &str, pos: Position| {
        if tokens.last().map(|t| t.kind) != Some(TokenKind::ParBreak) {
            tokens.push(Token {
                kind: TokenKind::ParBreak,
                text: text.to_string(),
                pos,
                space_before: false,
            });
        }
    };

    loop {
        if at_line_start {
            while sc.peek().is_some_and(is_blank) {
                sc.bump();
            }
            match sc.peek() {
                Some('\n') => {
                    let pos = sc.pos;
                    sc.bump();
                    push_par(&mut tokens, "\n", pos);
                    space = false;
                    continue;
                }
                Some('%') => {
                    sc.skip_comment();
                    continue;
                }
                _ => at_line_start = false,
            }
        }
        let Some(c) = sc.peek() else { break };
        let pos = sc.pos;
        match c {
            '\n' => {
                sc.bump();
                space = true;
                at_line_start = true;
            }
            c if is_blank(c) => {
                sc.bump();
                space = true;
            }
            '%' => {
                sc.skip_comment();
                at_line_start = true;
            }
            '}' => {
                return Err(ParseError::UnbalancedBrace {
                    pos,
                    detail: "unexpected '}'",
                });
            }
            '{' => {
                sc.bump();
                let text = scan_group(&mut sc, pos)?;
                tokens.push(Token {
                    kind: TokenKind::Group,
                    text,
                    pos,
                    space_before: space,
                });
                space = false;
            }
            '\\' => {
                sc.bump();
                let mut name = String::from("\\");
                while let Some(c) = sc.peek().filter(|c| c.is_ascii_alphabetic()) {
                    name.push(c);
                    sc.bump();
                }
                if name.len() == 1 {
                    // Control symbol: keep it verbatim as a word.
                    if let Some(c) = sc.peek().filter(|&c| c != '\n') {
                        name.push(c);
                        sc.bump();
                    }
                    tokens.push(Token {
                        kind: TokenKind::Word,
                        text: name,
                        pos,
                        space_before: space,
                    });
                } else if name == "\\par" {
                    push_par(&mut tokens, "\\par", pos);
                } else {
                    tokens.push(Token {
                        kind: TokenKind::Command,
                        text: name,
                        pos,
                        space_before: space,
                    });
                }
                space = false;
            }
            _ => {
                let mut word = String::new();
                if sc.at_display_math() {
                    sc.bump();
                    sc.bump();
                    word.push_str("$$");
                } else {
                    while let Some(c) = sc.peek() {
                        if c.is_whitespace()
                            || matches!(c, '\\' | '{' | '}' | '%')
                            || sc.at_display_math()
                        {
                            break;
                        }
                        word.push(c);
                        sc.bump();
                    }
                }
                tokens.push(Token {
                    kind: TokenKind::Word,
                    text: word,
                    pos,
                    space_before: space,
                });
                space = false;
            }
        }
    }
    Ok(tokens)
}

fn scan_group(sc: &mut Scanner, open: Position) -> Result<String, ParseError> {
    let mut depth = 1usize;
    let mut text = String::new();
    loop {
        let Some(c) = sc.bump() else {
            return Err(ParseError::UnbalancedBrace {
                pos: open,
                detail: "'{' never closed",
            });
        };
        match c {
            '\\' => {
                text.push(c);
                if let Some(n) = sc.bump() {
                    text.push(n);
                }
            }
            '%' => sc.skip_comment(),
            '{' => {
                depth += 1;
                text.push(c);
            }
            '}' => {
                depth -= 1;
                if depth == 0 {
                    return Ok(text);
                }
                text.push(c);
            }
            _ => text.push(c),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeCommand {
    Draft,
    Symbols,
    ForwardRefs,
    Index,
    AutoBibliography,
    DoubleNumbering,
    /// Italic citations; parsed and ignored.
    ItalicCitations,
}

/// Document-wide mode switches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ModeFlags {
    pub draft: bool,
    pub symbols: bool,
    pub forward_refs: bool,
    pub double_numbering: bool,
    pub index: bool,
    pub auto_bibliography: bool,
}

impl ModeFlags {
    pub fn union(self, other: ModeFlags) -> ModeFlags {
        ModeFlags {
            draft: self.draft || other.draft,
            symbols: self.symbols || other.symbols,
            forward_refs: self.forward_refs || other.forward_refs,
            double_numbering: self.double_numbering || other.double_numbering,
            index: self.index || other.index,
            auto_bibliography: self.auto_bibliography || other.auto_bibliography,
        }
    }

    fn set(&mut self, cmd: ModeCommand) {
        match cmd {
            ModeCommand::Draft => self.draft = true,
            ModeCommand::Symbols => self.symbols = true,
            ModeCommand::ForwardRefs => self.forward_refs = true,
            ModeCommand::Index => self.index = true,
            ModeCommand::AutoBibliography => self.auto_bibliography = true,
            ModeCommand::DoubleNumbering => self.double_numbering = true,
            ModeCommand::ItalicCitations => {}
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SectionKind {
    /// `\autosez`
    Section,
    /// `\capitolo`
    Chapter,
    /// `\semiautosez`; the argument is the section designation, not a label.
    Semi,
    /// `\autopara`
    Paragraph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EqPlacement {
    /// `\autoeqno`
    Right,
    /// `\autoleqno`
    Left,
    /// `\eqlabel`: numbers without typesetting anything.
    Silent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RefKind {
    Sref,
    Pararef,
    /// `\eqref`, parenthesized.
    Eqref,
    /// `\eqsref`, bare.
    Eqsref,
    Lemmaref,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TheoremKind {
    Theorem,
    Lemma,
    Proposition,
    Corollary,
    Remark,
    Definition,
    Assumption,
    Example,
}

impl TheoremKind {
    pub fn display_name(self) -> &'static str {
        match self {
            TheoremKind::Theorem => "Theorem",
            TheoremKind::Lemma => "Lemma",
            TheoremKind::Proposition => "Proposition",
            TheoremKind::Corollary => "Corollary",
            TheoremKind::Remark => "Remark",
            TheoremKind::Definition => "Definition",
            TheoremKind::Assumption => "Assumption",
            TheoremKind::Example => "Example",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PresetCounter {
    Section,
    Equation,
    Citation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StyleCmd {
    CiteBrackets {
        left: String,
        right: String,
    },
    BiblBrackets {
        left: String,
        right: String,
    },
    /// `\biblskip{dim}`; recorded, rendering always uses one blank line.
    BiblSkip(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoilerplateKind {
    Proof,
    Abstract,
    Summary,
    Firma,
    Title,
    Rivista,
    /// `\commento{...}`: the argument is discarded.
    Comment,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    Mode(ModeCommand),
    Section {
        kind: SectionKind,
        arg: String,
        title: String,
    },
    Equation {
        label: String,
        placement: EqPlacement,
        body: String,
    },
    Ref {
        kind: RefKind,
        label: String,
    },
    Theorem {
        kind: TheoremKind,
        label: String,
        body: Vec<Node>,
    },
    /// `\autolemma` (visible) or `\lemmalabel` (silent).
    LemmaNumber {
        label: String,
        visible: bool,
    },
    Citation {
        form: CitationForm,
        labels: Vec<String>,
    },
    BibItem {
        label: String,
        text: String,
    },
    InsertBibliography,
    /// `\quiindice`
    IndexHere,
    Preset {
        counter: PresetCounter,
        raw: String,
    },
    Style(StyleCmd),
    Text(String),
    /// Unnumbered `$$ ... $$`.
    DisplayMath(String),
    Qed,
    Boilerplate {
        kind: BoilerplateKind,
        arg: Option<String>,
    },
    Par,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub kind: NodeKind,
    pub pos: Position,
    pub space_before: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Document {
    pub nodes: Vec<Node>,
    /// Parse-time warnings (unknown commands).
    pub warnings: Vec<Diagnostic>,
}

type Builder = fn(Vec<String>, &mut Parser) -> Result<NodeKind, ParseError>;

/// Argument shape of a recognized command.
enum Shape {
    Nullary(NodeKind),
    /// Brace labels followed by a paragraph-delimited text argument.
    ParDelimited(SectionLike),
    Braces(usize, Builder),
}

#[derive(Clone, Copy)]
enum SectionLike {
    Section(SectionKind),
    BibItem,
}

fn lookup(name: &str) -> Option<Shape> {
    use NodeKind as N;
    let nullary = |k| Some(Shape::Nullary(k));
    let braces = |n: usize, f: Builder| Some(Shape::Braces(n, f));
    match name {
        "bozze" => nullary(N::Mode(ModeCommand::Draft)),
        "simboli" => nullary(N::Mode(ModeCommand::Symbols)),
        "riferimentifuturi" => nullary(N::Mode(ModeCommand::ForwardRefs)),
        "indice" => nullary(N::Mode(ModeCommand::Index)),
        "autobibliografia" => nullary(N::Mode(ModeCommand::AutoBibliography)),
        "numerazionedoppia" => nullary(N::Mode(ModeCommand::DoubleNumbering)),
        "citazionicorsive" => nullary(N::Mode(ModeCommand::ItalicCitations)),
        "autosez" => Some(Shape::ParDelimited(SectionLike::Section(
            SectionKind::Section,
        ))),
        "capitolo" => Some(Shape::ParDelimited(SectionLike::Section(
            SectionKind::Chapter,
        ))),
        "semiautosez" => Some(Shape::ParDelimited(SectionLike::Section(SectionKind::Semi))),
        "autopara" => Some(Shape::ParDelimited(SectionLike::Section(
            SectionKind::Paragraph,
        ))),
        "biblitem" => Some(Shape::ParDelimited(SectionLike::BibItem)),
        "autoeqno" => braces(1, |a, _| Ok(equation(a, EqPlacement::Right))),
        "autoleqno" => braces(1, |a, _| Ok(equation(a, EqPlacement::Left))),
        "eqlabel" => braces(1, |a, _| Ok(equation(a, EqPlacement::Silent))),
        "sref" => braces(1, |a, _| Ok(reference(a, RefKind::Sref))),
        "pararef" => braces(1, |a, _| Ok(reference(a, RefKind::Pararef))),
        "eqref" => braces(1, |a, _| Ok(reference(a, RefKind::Eqref))),
        "eqsref" => braces(1, |a, _| Ok(reference(a, RefKind::Eqsref))),
        "lemmaref" => braces(1, |a, _| Ok(reference(a, RefKind::Lemmaref))),
        "autolemma" => braces(1, |a, _| Ok(lemma_number(a, true))),
        "lemmalabel" => braces(1, |a, _| Ok(lemma_number(a, false))),
        "theorem" => braces(2, |a, p| theorem(a, p, TheoremKind::Theorem)),
        "lemma" => braces(2, |a, p| theorem(a, p, TheoremKind::Lemma)),
        "proposition" => braces(2, |a, p| theorem(a, p, TheoremKind::Proposition)),
        "corollary" => braces(2, |a, p| theorem(a, p, TheoremKind::Corollary)),
        "remark" => braces(2, |a, p| theorem(a, p, TheoremKind::Remark)),
        "definition" => braces(2, |a, p| theorem(a, p, TheoremKind::Definition)),
        "assumption" => braces(2, |a, p| theorem(a, p, TheoremKind::Assumption)),
        "example" => braces(2, |a, p| theorem(a, p, TheoremKind::Example)),
        "cref" => braces(1, |a, _| Ok(citation(a, CitationForm::Bare))),
        "upcref" => braces(1, |a, _| Ok(citation(a, CitationForm::UpBare))),
        "cite" => braces(1, |a, _| Ok(citation(a, CitationForm::Single))),
        "ccite" => braces(2, |a, _| Ok(citation(a, CitationForm::Pair))),
        "ncite" => braces(2, |a, _| Ok(citation(a, CitationForm::Range))),
        "upcite" => braces(1, |a, _| Ok(citation(a, CitationForm::UpSingle))),
        "upccite" => braces(2, |a, _| Ok(citation(a, CitationForm::UpPair))),
        "upncite" => braces(2, |a, _| Ok(citation(a, CitationForm::UpRange))),
        "clabel" => braces(1, |a, _| Ok(citation(a, CitationForm::Label))),
        "cclabel" => braces(2, |a, _| Ok(citation(a, CitationForm::Label))),
        "ccclabel" => braces(3, |a, _| Ok(citation(a, CitationForm::Label))),
        "insertbibliografia" => nullary(N::InsertBibliography),
        "quiindice" => nullary(N::IndexHere),
        "sezpreset" => braces(1, |a, _| Ok(preset(a, PresetCounter::Section))),
        "eqpreset" => braces(1, |a, _| Ok(preset(a, PresetCounter::Equation))),
        "citpreset" => braces(1, |a, _| Ok(preset(a, PresetCounter::Citation))),
        "stileincite" => braces(2, |mut a, _| {
            let right = a.pop().unwrap_or_default();
            let left = a.pop().unwrap_or_default();
            Ok(N::Style(StyleCmd::CiteBrackets { left, right }))
        }),
        "stileinbibl" => braces(2, |mut a, _| {
            let right = a.pop().unwrap_or_default();
            let left = a.pop().unwrap_or_default();
            Ok(N::Style(StyleCmd::BiblBrackets { left, right }))
        }),
        "biblskip" => braces(1, |mut a, _| Ok(N::Style(StyleCmd::BiblSkip(a.remove(0))))),
        "quadratino" => nullary(N::Qed),
        "proof" => nullary(boilerplate(BoilerplateKind::Proof, None)),
        "abstract" => nullary(boilerplate(BoilerplateKind::Abstract, None)),
        "summary" => nullary(boilerplate(BoilerplateKind::Summary, None)),
        "firma" => nullary(boilerplate(BoilerplateKind::Firma, None)),
        "title" => braces(1, |mut a, _| {
            Ok(boilerplate(BoilerplateKind::Title, Some(a.remove(0))))
        }),
        "rivista" => braces(1, |mut a, _| {
            Ok(boilerplate(BoilerplateKind::Rivista, Some(a.remove(0))))
        }),
        "commento" => braces(1, |mut a, _| {
            Ok(boilerplate(BoilerplateKind::Comment, Some(a.remove(0))))
        }),
        _ => None,
    }
}

fn equation(mut args: Vec<String>, placement: EqPlacement) -> NodeKind {
    NodeKind::Equation {
        label: args.remove(0),
        placement,
        body: String::new(),
    }
}

fn reference(mut args: Vec<String>, kind: RefKind) -> NodeKind {
    NodeKind::Ref {
        kind,
        label: args.remove(0),
    }
}

fn lemma_number(mut args: Vec<String>, visible: bool) -> NodeKind {
    NodeKind::LemmaNumber {
        label: args.remove(0),
        visible,
    }
}

fn citation(labels: Vec<String>, form: CitationForm) -> NodeKind {
    NodeKind::Citation { form, labels }
}

fn preset(mut args: Vec<String>, counter: PresetCounter) -> NodeKind {
    NodeKind::Preset {
        counter,
        raw: args.remove(0),
    }
}

fn boilerplate(kind: BoilerplateKind, arg: Option<String>) -> NodeKind {
    NodeKind::Boilerplate { kind, arg }
}

fn theorem(
    mut args: Vec<String>,
    p: &mut Parser,
    kind: TheoremKind,
) -> Result<NodeKind, ParseError> {
    let body_src = args.pop().unwrap_or_default();
    let label = args.pop().unwrap_or_default();
    let body_pos = p.last_group_pos;
    let body = p.parse_nested(&body_src, body_pos)?;
    Ok(NodeKind::Theorem { kind, label, body })
}

struct Parser {
    tokens: Vec<Token>,
    idx: usize,
    warnings: Vec<Diagnostic>,
    /// Content start of the most recently consumed brace group.
    last_group_pos: Position,
}

/// Build the document tree from a token list.
pub fn parse_document(tokens: Vec<Token>) -> Result<Document, ParseError> {
    let mut p = Parser {
        tokens,
        idx: 0,
        warnings: Vec::new(),
        last_group_pos: Position::default(),
    };
    let nodes = p.parse_nodes()?;
    Ok(Document {
        nodes,
        warnings: p.warnings,
    })
}

/// Tokenize and parse in one step.
pub fn parse_source(source: &str) -> Result<Document, ParseError> {
    parse_document(tokenize(source)?)
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.idx)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.idx).cloned();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn parse_nested(&mut self, src: &str, pos: Position) -> Result<Vec<Node>, ParseError> {
        let tokens = tokenize_at(src, pos)?;
        let mut inner = Parser {
            tokens,
            idx: 0,
            warnings: Vec::new(),
            last_group_pos: pos,
        };
        let nodes = inner.parse_nodes()?;
        self.warnings.append(&mut inner.warnings);
        Ok(nodes)
    }

    fn expect_group(&mut self, command: &str, pos: Position) -> Result<String, ParseError> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Group => {
                let t = self.next().expect("peeked");
                // Content begins one column after the opening brace.
                self.last_group_pos = Position {
                    line: t.pos.line,
                    column: t.pos.column + 1,
                };
                Ok(t.text)
            }
            _ => Err(ParseError::MissingArgument {
                command: command.to_string(),
                pos,
            }),
        }
    }

    /// Tokens up to the next paragraph break, rendered back to text.
    fn take_paragraph_text(&mut self) -> String {
        let mut out = String::new();
        while let Some(t) = self.next() {
            if t.kind == TokenKind::ParBreak {
                break;
            }
            if !out.is_empty() && t.space_before {
                out.push(' ');
            }
            out.push_str(&t.source_text());
        }
        out
    }

    fn parse_nodes(&mut self) -> Result<Vec<Node>, ParseError> {
        let mut nodes: Vec<Node> = Vec::new();
        while let Some(tok) = self.next() {
            let pos = tok.pos;
            let space_before = tok.space_before;
            let node = |kind| Node {
                kind,
                pos,
                space_before,
            };
            match tok.kind {
                TokenKind::ParBreak => {
                    if !matches!(
                        nodes.last(),
                        Some(Node {
                            kind: NodeKind::Par,
                            ..
                        })
                    ) {
                        nodes.push(node(NodeKind::Par));
                    }
                }
                TokenKind::Word if tok.text == "$$" => {
                    nodes.push(self.parse_display(pos, space_before)?);
                }
                TokenKind::Word => {
                    // Merge adjacent words into one text run.
                    if let Some(Node {
                        kind: NodeKind::Text(prev),
                        ..
                    }) = nodes.last_mut()
                    {
                        if space_before {
                            prev.push(' ');
                        }
                        prev.push_str(&tok.text);
                    } else {
                        nodes.push(node(NodeKind::Text(tok.text)));
                    }
                }
                TokenKind::Group => {
                    // Bare groups only scope fonts; their contents are spliced in.
                    let inner_pos = Position {
                        line: pos.line,
                        column: pos.column + 1,
                    };
                    let mut inner = self.parse_nested(&tok.text, inner_pos)?;
                    if let Some(first) = inner.first_mut() {
                        first.space_before = space_before;
                    }
                    nodes.extend(inner);
                }
                TokenKind::Command => {
                    let kind = self.parse_command(&tok)?;
                    nodes.push(node(kind));
                }
            }
        }
        Ok(nodes)
    }

    fn parse_command(&mut self, tok: &Token) -> Result<NodeKind, ParseError> {
        let name = &tok.text[1..];
        let Some(shape) = lookup(name) else {
            self.warnings
                .push(Diagnostic::unknown_command(&tok.text, tok.pos));
            // Keep directly attached brace groups as part of the literal.
            let mut literal = tok.text.clone();
            while let Some(t) = self.peek() {
                if t.kind != TokenKind::Group || t.space_before {
                    break;
                }
                literal.push_str(&t.source_text());
                self.idx += 1;
            }
            return Ok(NodeKind::Text(literal));
        };
        match shape {
            Shape::Nullary(kind) => Ok(kind),
            Shape::Braces(n, build) => {
                let mut args = Vec::with_capacity(n);
                for _ in 0..n {
                    args.push(self.expect_group(&tok.text, tok.pos)?);
                }
                build(args, self)
            }
            Shape::ParDelimited(like) => {
                let arg = self.expect_group(&tok.text, tok.pos)?;
                let text = self.take_paragraph_text();
                Ok(match like {
                    SectionLike::Section(kind) => NodeKind::Section {
                        kind,
                        arg,
                        title: text,
                    },
                    SectionLike::BibItem => NodeKind::BibItem { label: arg, text },
                })
            }
        }
    }

    /// `$$ ... $$`, numbered when it holds one `\autoeqno`/`\autoleqno`/`\eqlabel`.
    fn parse_display(&mut self, open: Position, space_before: bool) -> Result<Node, ParseError> {
        let mut body = String::new();
        let mut number: Option<(String, EqPlacement)> = None;
        loop {
            let Some(t) = self.next() else {
                return Err(ParseError::UnterminatedMath { pos: open });
            };
            match t.kind {
                TokenKind::ParBreak => return Err(ParseError::ParInMath { pos: t.pos }),
                TokenKind::Word if t.text == "$$" => break,
                TokenKind::Command
                    if matches!(t.text.as_str(), "\\autoeqno" | "\\autoleqno" | "\\eqlabel") =>
                {
                    let label = self.expect_group(&t.text, t.pos)?;
                    if number.is_some() {
                        return Err(ParseError::MultipleEqno { pos: t.pos });
                    }
                    let placement = match t.text.as_str() {
                        "\\autoeqno" => EqPlacement::Right,
                        "\\autoleqno" => EqPlacement::Left,
                        _ => EqPlacement::Silent,
                    };
                    number = Some((label, placement));
                }
                _ => {
                    if !body.is_empty() && t.space_before {
                        body.push(' ');
                    }
                    body.push_str(&t.source_text());
                }
            }
        }
        let kind = match number {
            Some((label, placement)) => NodeKind::Equation {
                label,
                placement,
                body,
            },
            None => NodeKind::DisplayMath(body),
        };
        Ok(Node {
            kind,
            pos: open,
            space_before,
        })
    }
}

/// Pointwise OR of the document's mode commands with the overrides.
pub fn extract_mode_flags(doc: &Document, overrides: ModeFlags) -> ModeFlags {
    fn walk(nodes: &[Node], flags: &mut ModeFlags) {
        for n in nodes {
            match &n.kind {
                NodeKind::Mode(m) => flags.set(*m),
                NodeKind::Theorem { body, .. } => walk(body, flags),
                _ => {}
            }
        }
    }
    let mut flags = overrides;
    walk(&doc.nodes, &mut flags);
    flags
}

/// True if `\quiindice` appears anywhere.
pub fn contains_index_here(nodes: &[Node]) -> bool {
    nodes.iter().any(|n| match &n.kind {
        NodeKind::IndexHere => true,
        NodeKind::Theorem { body, .. } => contains_index_here(body),
        _ => false,
    })
}
