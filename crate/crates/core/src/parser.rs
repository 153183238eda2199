//! Text format for defeasible logic programs and queries.
//!
//! Concrete tokens: `<-` strict arrow, `-<` defeasible arrow, `~` strong
//! negation, `not` default negation, `,` body separator, `.` terminator,
//! `%` line comment. Rules may carry an optional `label:` prefix; priorities
//! are standalone clauses `stronger > weaker.` between defeasible labels.
//! A presumption is written `head -< true.`.
//!
//! This grammar is the wire format of the project: `format_program` emits a
//! canonical form (facts, strict rules, defeasible rules, priorities, each
//! section sorted) that re-parses to an equal program.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::model::{BodyAtom, Literal, Mode, Program, Rule, RuleKind, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceSpan {
    pub file: Option<Arc<str>>,
    pub start_line: usize,
    pub start_col: usize,
    pub end_line: usize,
    pub end_col: usize,
}

impl SourceSpan {
    fn point(file: Option<Arc<str>>, line: usize, col: usize) -> Self {
        SourceSpan { file, start_line: line, start_col: col, end_line: line, end_col: col }
    }

    fn to(self, other: SourceSpan) -> Self {
        SourceSpan {
            end_line: other.end_line,
            end_col: other.end_col,
            ..self
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(file) = &self.file {
            write!(f, "{file}:")?;
        }
        write!(f, "{}:{}", self.start_line, self.start_col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub severity: Severity,
    pub message: String,
    pub span: SourceSpan,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}: {}: {}", self.span, sev, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Var(String),
    Not,
    True,
    Tilde,
    StrictArrow,
    DefArrow,
    Comma,
    Dot,
    LParen,
    RParen,
    Colon,
    Gt,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Var(s) => write!(f, "`{s}`"),
            Tok::Not => write!(f, "`not`"),
            Tok::True => write!(f, "`true`"),
            Tok::Tilde => write!(f, "`~`"),
            Tok::StrictArrow => write!(f, "`<-`"),
            Tok::DefArrow => write!(f, "`-<`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Gt => write!(f, "`>`"),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    file: Option<Arc<str>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str, file: Option<Arc<str>>) -> Self {
        Lexer { chars: text.chars().peekable(), file, line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn tokens(mut self) -> Result<Vec<(Tok, SourceSpan)>, ParseDiagnostic> {
        let mut out = Vec::new();
        loop {
            while let Some(&c) = self.chars.peek() {
                if c.is_whitespace() {
                    self.bump();
                } else if c == '%' {
                    while let Some(&c) = self.chars.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                } else {
                    break;
                }
            }
            let (line, col) = (self.line, self.col);
            let Some(c) = self.bump() else { break };
            let start = SourceSpan::point(self.file.clone(), line, col);
            let tok = match c {
                '~' => Tok::Tilde,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ':' => Tok::Colon,
                '>' => Tok::Gt,
                '<' => {
                    if self.chars.peek() == Some(&'-') {
                        self.bump();
                        Tok::StrictArrow
                    } else {
                        return Err(ParseDiagnostic {
                            severity: Severity::Error,
                            message: "expected `<-`".into(),
                            span: start,
                        });
                    }
                }
                '-' => {
                    if self.chars.peek() == Some(&'<') {
                        self.bump();
                        Tok::DefArrow
                    } else {
                        return Err(ParseDiagnostic {
                            severity: Severity::Error,
                            message: "expected `-<`".into(),
                            span: start,
                        });
                    }
                }
                c if c.is_alphabetic() || c == '_' => {
                    let mut name = String::new();
                    name.push(c);
                    while let Some(&n) = self.chars.peek() {
                        if n.is_alphanumeric() || n == '_' {
                            name.push(n);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    match name.as_str() {
                        "not" => Tok::Not,
                        "true" => Tok::True,
                        _ if name.chars().next().unwrap().is_uppercase() => Tok::Var(name),
                        _ => Tok::Ident(name),
                    }
                }
                other => {
                    return Err(ParseDiagnostic {
                        severity: Severity::Error,
                        message: format!("unexpected character `{other}`"),
                        span: start,
                    });
                }
            };
            let end = SourceSpan::point(None, self.line, self.col.saturating_sub(1));
            out.push((tok, start.to(end)));
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    mode: Mode,
    diags: Vec<ParseDiagnostic>,
    program: Program,
    labels: BTreeSet<String>,
    priority_spans: Vec<(String, String, SourceSpan)>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(t, _)| t)
    }

    fn span(&self) -> SourceSpan {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|(_, s)| s.clone())
            .unwrap_or_else(|| SourceSpan::point(None, 1, 1))
    }

    fn bump(&mut self) -> Option<(Tok, SourceSpan)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error(&mut self, message: impl Into<String>, span: SourceSpan) {
        self.diags.push(ParseDiagnostic { severity: Severity::Error, message: message.into(), span });
    }

    fn expect(&mut self, tok: Tok) -> Result<SourceSpan, ()> {
        match self.peek() {
            Some(t) if *t == tok => Ok(self.bump().unwrap().1),
            Some(t) => {
                let msg = format!("expected {tok}, found {t}");
                let span = self.span();
                self.error(msg, span);
                Err(())
            }
            None => {
                let span = self.span();
                self.error(format!("expected {tok}, found end of input"), span);
                Err(())
            }
        }
    }

    /// Skip to just past the next `.`, so one bad clause does not swallow
    /// the rest of the file. If the failing clause already consumed its
    /// terminator, stay put.
    fn recover(&mut self) {
        if self.pos > 0 && matches!(self.toks.get(self.pos - 1), Some((Tok::Dot, _))) {
            return;
        }
        while let Some((t, _)) = self.bump() {
            if t == Tok::Dot {
                break;
            }
        }
    }

    fn parse_term(&mut self) -> Result<Term, ()> {
        match self.bump() {
            Some((Tok::Ident(name), _)) => Ok(Term::constant(name)),
            Some((Tok::Var(name), _)) => Ok(Term::variable(name)),
            Some((t, span)) => {
                self.error(format!("expected a term, found {t}"), span);
                Err(())
            }
            None => {
                let span = self.span();
                self.error("expected a term, found end of input", span);
                Err(())
            }
        }
    }

    fn parse_literal(&mut self) -> Result<Literal, ()> {
        let negated = if self.peek() == Some(&Tok::Tilde) {
            self.bump();
            true
        } else {
            false
        };
        let predicate = match self.bump() {
            Some((Tok::Ident(name), _)) => name,
            Some((t, span)) => {
                self.error(format!("expected a predicate name, found {t}"), span);
                return Err(());
            }
            None => {
                let span = self.span();
                self.error("expected a predicate name, found end of input", span);
                return Err(());
            }
        };
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::LParen) {
            self.bump();
            loop {
                args.push(self.parse_term()?);
                match self.bump() {
                    Some((Tok::Comma, _)) => continue,
                    Some((Tok::RParen, _)) => break,
                    Some((t, span)) => {
                        self.error(format!("expected `,` or `)`, found {t}"), span);
                        return Err(());
                    }
                    None => {
                        let span = self.span();
                        self.error("unclosed argument list", span);
                        return Err(());
                    }
                }
            }
        }
        Ok(Literal::new(negated, predicate, args))
    }

    fn parse_clause(&mut self) -> Result<(), ()> {
        // Priority declaration: `label > label.`
        if matches!(self.peek(), Some(Tok::Ident(_))) && self.peek2() == Some(&Tok::Gt) {
            let (stronger, span) = match self.bump() {
                Some((Tok::Ident(n), s)) => (n, s),
                _ => unreachable!(),
            };
            self.expect(Tok::Gt)?;
            let weaker = match self.bump() {
                Some((Tok::Ident(n), _)) => n,
                Some((t, span)) => {
                    self.error(format!("expected a rule label, found {t}"), span);
                    return Err(());
                }
                None => {
                    let span = self.span();
                    self.error("expected a rule label, found end of input", span);
                    return Err(());
                }
            };
            self.expect(Tok::Dot)?;
            self.priority_spans.push((stronger.clone(), weaker.clone(), span));
            self.program.priorities.push((stronger, weaker));
            return Ok(());
        }

        // Optional rule label.
        let mut label = None;
        if matches!(self.peek(), Some(Tok::Ident(_))) && self.peek2() == Some(&Tok::Colon) {
            let (name, span) = match self.bump() {
                Some((Tok::Ident(n), s)) => (n, s),
                _ => unreachable!(),
            };
            self.bump(); // colon
            if !self.labels.insert(name.clone()) {
                self.error(format!("duplicate rule label `{name}`"), span);
                return Err(());
            }
            label = Some(name);
        }

        let head_span = self.span();
        let head = self.parse_literal()?;

        let kind = match self.peek() {
            Some(Tok::Dot) => {
                self.bump();
                if label.is_some() {
                    self.error("facts cannot carry a rule label", head_span);
                    return Err(());
                }
                if !head.is_ground() {
                    self.error(format!("fact `{head}` contains variables"), head_span);
                    return Err(());
                }
                self.program.facts.push(head);
                return Ok(());
            }
            Some(Tok::StrictArrow) => {
                self.bump();
                RuleKind::Strict
            }
            Some(Tok::DefArrow) => {
                self.bump();
                RuleKind::Defeasible
            }
            Some(t) => {
                let msg = format!("expected `.`, `<-` or `-<`, found {t}");
                let span = self.span();
                self.error(msg, span);
                return Err(());
            }
            None => {
                let span = self.span();
                self.error("unterminated clause at end of input", span);
                return Err(());
            }
        };

        // Presumption surface form: `head -< true.`
        if self.peek() == Some(&Tok::True) {
            let span = self.span();
            self.bump();
            self.expect(Tok::Dot)?;
            if kind == RuleKind::Strict {
                self.error("a strict rule cannot have body `true`; write a fact instead", span);
                return Err(());
            }
            if !self.mode.presumptions {
                self.error("presumptions require the presumption mode", span);
                return Err(());
            }
            if !head.is_ground() {
                self.error(format!("presumption `{head}` contains variables"), span);
                return Err(());
            }
            let mut rule = Rule::presumption(head);
            rule.label = label;
            self.program.defeasible_rules.push(rule);
            return Ok(());
        }

        let mut body = Vec::new();
        loop {
            let atom_span = self.span();
            let default_negated = if self.peek() == Some(&Tok::Not) {
                self.bump();
                true
            } else {
                false
            };
            if default_negated && self.peek() == Some(&Tok::True) {
                self.error("`not true` is not a body atom", atom_span);
                return Err(());
            }
            let literal = self.parse_literal()?;
            if default_negated {
                if kind == RuleKind::Strict {
                    self.error("default negation not allowed in strict rules", atom_span);
                    return Err(());
                }
                if !self.mode.default_negation {
                    self.error("default negation requires the default-negation mode", atom_span);
                    return Err(());
                }
            }
            body.push(BodyAtom { default_negated, literal });
            match self.bump() {
                Some((Tok::Comma, _)) => continue,
                Some((Tok::Dot, _)) => break,
                Some((t, span)) => {
                    self.error(format!("expected `,` or `.`, found {t}"), span);
                    return Err(());
                }
                None => {
                    let span = self.span();
                    self.error("unterminated rule at end of input", span);
                    return Err(());
                }
            }
        }

        // Range restriction: every head variable must occur in the body.
        let body_vars: BTreeSet<&str> = body
            .iter()
            .flat_map(|b| b.literal.args.iter())
            .filter(|t| t.is_variable())
            .map(|t| t.name())
            .collect();
        for t in &head.args {
            if t.is_variable() && !body_vars.contains(t.name()) {
                self.error(
                    format!("head variable `{}` does not occur in the body", t.name()),
                    head_span,
                );
                return Err(());
            }
        }

        let mut rule = match kind {
            RuleKind::Strict => Rule::strict(head, body),
            RuleKind::Defeasible => Rule::defeasible(head, body),
        };
        rule.label = label;
        match kind {
            RuleKind::Strict => self.program.strict_rules.push(rule),
            RuleKind::Defeasible => self.program.defeasible_rules.push(rule),
        }
        Ok(())
    }
}

/// Parses a program in the given mode. On success the returned program is in
/// canonical order with duplicates collapsed.
pub fn parse_program(text: &str, mode: Mode) -> Result<Program, Vec<ParseDiagnostic>> {
    parse_program_named(text, mode, None)
}

/// Like [`parse_program`], stamping the given file name into every
/// diagnostic span.
pub fn parse_program_named(
    text: &str,
    mode: Mode,
    file: Option<&str>,
) -> Result<Program, Vec<ParseDiagnostic>> {
    let toks = match Lexer::new(text, file.map(Arc::from)).tokens() {
        Ok(t) => t,
        Err(d) => return Err(vec![d]),
    };
    let mut parser = Parser {
        toks,
        pos: 0,
        mode,
        diags: Vec::new(),
        program: Program { mode, ..Program::default() },
        labels: BTreeSet::new(),
        priority_spans: Vec::new(),
    };
    while parser.peek().is_some() {
        if parser.parse_clause().is_err() {
            parser.recover();
        }
    }
    for (a, b, span) in std::mem::take(&mut parser.priority_spans) {
        for l in [&a, &b] {
            if !parser.labels.contains(l) {
                parser.error(
                    format!("priority references label `{l}` which no rule carries"),
                    span.clone(),
                );
            }
        }
    }
    if parser.diags.iter().any(|d| d.severity == Severity::Error) {
        return Err(parser.diags);
    }
    let mut program = parser.program;
    program.canonicalize();
    Ok(program)
}

/// Parses a single ground literal, optionally `~`-negated. A trailing `.`
/// is tolerated.
pub fn parse_query(text: &str) -> Result<Literal, ParseDiagnostic> {
    let toks = Lexer::new(text, None).tokens()?;
    let mut parser = Parser {
        toks,
        pos: 0,
        mode: Mode::core(),
        diags: Vec::new(),
        program: Program::default(),
        labels: BTreeSet::new(),
        priority_spans: Vec::new(),
    };
    let lit = parser.parse_literal().map_err(|()| parser.diags.pop().unwrap())?;
    if parser.peek() == Some(&Tok::Dot) {
        parser.bump();
    }
    if let Some(t) = parser.peek() {
        return Err(ParseDiagnostic {
            severity: Severity::Error,
            message: format!("unexpected {t} after query literal"),
            span: parser.span(),
        });
    }
    if !lit.is_ground() {
        return Err(ParseDiagnostic {
            severity: Severity::Error,
            message: "queries must be ground".into(),
            span: SourceSpan::point(None, 1, 1),
        });
    }
    Ok(lit)
}

/// Canonical form: facts, strict rules, defeasible rules, priorities, each
/// section sorted. Re-parses to an equal program.
pub fn format_program(p: &Program) -> String {
    let mut p = p.clone();
    p.canonicalize();
    let mut out = String::new();
    for fact in &p.facts {
        out.push_str(&format!("{fact}.\n"));
    }
    for rule in &p.strict_rules {
        out.push_str(&format!("{rule}.\n"));
    }
    for rule in &p.defeasible_rules {
        out.push_str(&format!("{rule}.\n"));
    }
    for (a, b) in &p.priorities {
        out.push_str(&format!("{a} > {b}.\n"));
    }
    out
}
