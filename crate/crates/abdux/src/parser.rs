//! Parsers for the textual artifact formats.
//!
//! Theory files:
//!
//! ```text
//! % Bob's Saturdays
//! saturday.
//! skiing :- saturday, not snows.
//! on_campus :- not skiing.
//! #abducible snows/0.
//! ```
//!
//! Statements end with `.`; comments run from `%` to end of line.
//! Variables are uppercase-initial identifiers, constants are lowercase
//! identifiers, integer literals, or reserved `_`-prefixed tokens.
//! Integrity constraints are written `#ic h1 | ... | hm :- b1, ..., bk.`
//! with m ≥ 0. Observation files are lines of ground atoms; explanation
//! files are `#add atom.` / `#del atom.` lines. DIMACS CNF and QDIMACS
//! (∃ block then ∀ block) are also supported for the reduction
//! generators.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::cnf::{Cnf, Lit, QbfCnf, QbfLit, QbfVar};
use crate::core::{
    AbductiveTheory, Atom, Explanation, GroundAtom, IntegrityConstraint, Observation, Predicate,
    Rule, Term,
};

/// A 1-based source position: line plus a column range on that line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub file: String,
    pub line: usize,
    pub col_start: usize,
    pub col_end: usize,
}

impl SourceSpan {
    fn new(file: &str, line: usize, col_start: usize, col_end: usize) -> Self {
        debug_assert!(line >= 1 && col_start >= 1 && col_end >= col_start);
        SourceSpan {
            file: file.to_string(),
            line,
            col_start,
            col_end,
        }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}-{}",
            self.file, self.line, self.col_start, self.col_end
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
}

impl ParseError {
    fn new(span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError {
            span,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Var(String),
    Int(String),
    Not,
    LParen,
    RParen,
    Comma,
    Dot,
    ColonDash,
    Pipe,
    Slash,
    DirAbducible,
    DirIc,
    DirAdd,
    DirDel,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Var(s) | Tok::Int(s) => write!(f, "`{}`", s),
            Tok::Not => write!(f, "`not`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::ColonDash => write!(f, "`:-`"),
            Tok::Pipe => write!(f, "`|`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::DirAbducible => write!(f, "`#abducible`"),
            Tok::DirIc => write!(f, "`#ic`"),
            Tok::DirAdd => write!(f, "`#add`"),
            Tok::DirDel => write!(f, "`#del`"),
        }
    }
}

struct Lexer<'a> {
    file: &'a str,
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(file: &'a str, text: &str) -> Self {
        Lexer {
            file,
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn here(&self, width: usize) -> SourceSpan {
        SourceSpan::new(
            self.file,
            self.line,
            self.col,
            self.col + width.saturating_sub(1),
        )
    }

    fn tokens(mut self) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
        let mut out = Vec::new();
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
                continue;
            }
            if c == '%' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
                continue;
            }
            let start_line = self.line;
            let start_col = self.col;
            let span1 = |l: &Lexer, w: usize| {
                SourceSpan::new(l.file, start_line, start_col, start_col + w - 1)
            };
            match c {
                '(' => {
                    self.bump();
                    out.push((Tok::LParen, span1(&self, 1)));
                }
                ')' => {
                    self.bump();
                    out.push((Tok::RParen, span1(&self, 1)));
                }
                ',' => {
                    self.bump();
                    out.push((Tok::Comma, span1(&self, 1)));
                }
                '.' => {
                    self.bump();
                    out.push((Tok::Dot, span1(&self, 1)));
                }
                '|' => {
                    self.bump();
                    out.push((Tok::Pipe, span1(&self, 1)));
                }
                '/' => {
                    self.bump();
                    out.push((Tok::Slash, span1(&self, 1)));
                }
                ':' => {
                    self.bump();
                    if self.peek() == Some('-') {
                        self.bump();
                        out.push((Tok::ColonDash, span1(&self, 2)));
                    } else {
                        return Err(ParseError::new(self.here(1), "expected `-` after `:`"));
                    }
                }
                '#' => {
                    self.bump();
                    let mut name = String::new();
                    while let Some(c) = self.peek() {
                        if c.is_ascii_alphanumeric() || c == '_' {
                            name.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    let tok = match name.as_str() {
                        "abducible" => Tok::DirAbducible,
                        "ic" => Tok::DirIc,
                        "add" => Tok::DirAdd,
                        "del" => Tok::DirDel,
                        _ => {
                            return Err(ParseError::new(
                                span1(&self, name.len() + 1),
                                format!("unknown directive `#{}`", name),
                            ))
                        }
                    };
                    out.push((tok, span1(&self, name.len() + 1)));
                }
                c if c.is_ascii_digit() => {
                    let mut s = String::new();
                    while let Some(c) = self.peek() {
                        if c.is_ascii_digit() {
                            s.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    let w = s.len();
                    out.push((Tok::Int(s), span1(&self, w)));
                }
                c if c.is_ascii_lowercase() || c == '_' => {
                    let mut s = String::new();
                    while let Some(c) = self.peek() {
                        if c.is_ascii_alphanumeric() || c == '_' {
                            s.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    let w = s.len();
                    let tok = if s == "not" { Tok::Not } else { Tok::Ident(s) };
                    out.push((tok, span1(&self, w)));
                }
                c if c.is_ascii_uppercase() => {
                    let mut s = String::new();
                    while let Some(c) = self.peek() {
                        if c.is_ascii_alphanumeric() || c == '_' {
                            s.push(c);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    let w = s.len();
                    out.push((Tok::Var(s), span1(&self, w)));
                }
                other => {
                    return Err(ParseError::new(
                        self.here(1),
                        format!("unexpected character `{}`", other),
                    ));
                }
            }
        }
        Ok(out)
    }
}

struct Parser<'a> {
    file: &'a str,
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(file: &'a str, text: &str) -> Result<Self, ParseError> {
        let toks = Lexer::new(file, text).tokens()?;
        Ok(Parser { file, toks, pos: 0 })
    }

    fn eof_span(&self) -> SourceSpan {
        match self.toks.last() {
            Some((_, s)) => s.clone(),
            None => SourceSpan::new(self.file, 1, 1, 1),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_span(&self) -> SourceSpan {
        self.toks
            .get(self.pos)
            .map(|(_, s)| s.clone())
            .unwrap_or_else(|| self.eof_span())
    }

    fn next(&mut self) -> Option<(Tok, SourceSpan)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<SourceSpan, ParseError> {
        match self.next() {
            Some((t, s)) if t == want => Ok(s),
            Some((t, s)) => Err(ParseError::new(
                s,
                format!("expected {}, found {}", want, t),
            )),
            None => Err(ParseError::new(
                self.eof_span(),
                format!("expected {}, found end of input", want),
            )),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn parse_term(&mut self) -> Result<(Term, SourceSpan), ParseError> {
        match self.next() {
            Some((Tok::Ident(s), sp)) | Some((Tok::Int(s), sp)) => Ok((Term::constant(s), sp)),
            Some((Tok::Var(s), sp)) => Ok((Term::variable(s), sp)),
            Some((t, sp)) => Err(ParseError::new(sp, format!("expected term, found {}", t))),
            None => Err(ParseError::new(
                self.eof_span(),
                "expected term, found end of input",
            )),
        }
    }

    fn parse_atom(&mut self) -> Result<(Atom, SourceSpan), ParseError> {
        let (name, span) = match self.next() {
            Some((Tok::Ident(s), sp)) => (s, sp),
            Some((t, sp)) => {
                return Err(ParseError::new(sp, format!("expected atom, found {}", t)))
            }
            None => {
                return Err(ParseError::new(
                    self.eof_span(),
                    "expected atom, found end of input",
                ))
            }
        };
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::LParen) {
            self.expect(Tok::LParen)?;
            loop {
                let (t, _) = self.parse_term()?;
                args.push(t);
                match self.next() {
                    Some((Tok::Comma, _)) => continue,
                    Some((Tok::RParen, _)) => break,
                    Some((t, sp)) => {
                        return Err(ParseError::new(
                            sp,
                            format!("expected `,` or `)` in argument list, found {}", t),
                        ))
                    }
                    None => {
                        return Err(ParseError::new(
                            self.eof_span(),
                            "unclosed argument list at end of input",
                        ))
                    }
                }
            }
        }
        Ok((Atom::new(name, args), span))
    }

    fn parse_ground_atom(&mut self) -> Result<(GroundAtom, SourceSpan), ParseError> {
        let start = self.peek_span();
        let (atom, span) = self.parse_atom()?;
        match atom.to_ground() {
            Some(g) => Ok((g, span)),
            None => Err(ParseError::new(
                start,
                format!("atom `{}` must be ground", atom),
            )),
        }
    }

    /// `literal (, literal)*` up to (not including) the final dot.
    fn parse_body(&mut self) -> Result<(Vec<Atom>, Vec<Atom>), ParseError> {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        loop {
            if self.peek() == Some(&Tok::Not) {
                self.next();
                let (a, _) = self.parse_atom()?;
                neg.push(a);
            } else {
                let (a, _) = self.parse_atom()?;
                pos.push(a);
            }
            if self.peek() == Some(&Tok::Comma) {
                self.next();
                continue;
            }
            break;
        }
        Ok((pos, neg))
    }
}

enum Statement {
    Rule(Rule),
    Abducible(Predicate),
    Constraint(IntegrityConstraint),
}

fn parse_statement(p: &mut Parser) -> Result<(Statement, SourceSpan), ParseError> {
    let span = p.peek_span();
    match p.peek() {
        Some(Tok::DirAbducible) => {
            p.next();
            let name = match p.next() {
                Some((Tok::Ident(s), _)) => s,
                Some((t, sp)) => {
                    return Err(ParseError::new(
                        sp,
                        format!("expected predicate name, found {}", t),
                    ))
                }
                None => {
                    return Err(ParseError::new(
                        p.eof_span(),
                        "expected predicate name after `#abducible`",
                    ))
                }
            };
            p.expect(Tok::Slash)?;
            let arity = match p.next() {
                Some((Tok::Int(s), sp)) => s
                    .parse::<usize>()
                    .map_err(|_| ParseError::new(sp, "arity out of range"))?,
                Some((t, sp)) => {
                    return Err(ParseError::new(sp, format!("expected arity, found {}", t)))
                }
                None => return Err(ParseError::new(p.eof_span(), "expected arity after `/`")),
            };
            p.expect(Tok::Dot)?;
            Ok((Statement::Abducible(Predicate::new(name, arity)), span))
        }
        Some(Tok::DirIc) => {
            p.next();
            let mut heads = Vec::new();
            if p.peek() != Some(&Tok::ColonDash) {
                loop {
                    let (a, _) = p.parse_atom()?;
                    heads.push(a);
                    if p.peek() == Some(&Tok::Pipe) {
                        p.next();
                        continue;
                    }
                    break;
                }
            }
            p.expect(Tok::ColonDash)?;
            let (pos, neg) = p.parse_body()?;
            p.expect(Tok::Dot)?;
            let ic = IntegrityConstraint::new(heads, pos, neg);
            let unsafe_vars = ic.unsafe_variables();
            if !unsafe_vars.is_empty() {
                return Err(ParseError::new(
                    span,
                    format!(
                        "unsafe constraint: variable(s) {} not bound by a positive body atom",
                        unsafe_vars
                            .iter()
                            .map(|v| v.name())
                            .collect::<Vec<_>>()
                            .join(", ")
                    ),
                ));
            }
            Ok((Statement::Constraint(ic), span))
        }
        _ => {
            let (head, _) = p.parse_atom()?;
            let (pos, neg) = match p.peek() {
                Some(Tok::ColonDash) => {
                    p.next();
                    p.parse_body()?
                }
                _ => (Vec::new(), Vec::new()),
            };
            p.expect(Tok::Dot)?;
            let rule = Rule::new(head, pos, neg);
            let unsafe_vars = rule.unsafe_variables();
            if !unsafe_vars.is_empty() {
                return Err(ParseError::new(
                    span,
                    format!(
                        "unsafe rule: variable(s) {} not bound by a positive body atom",
                        unsafe_vars
                            .iter()
                            .map(|v| v.name())
                            .collect::<Vec<_>>()
                            .join(", ")
                    ),
                ));
            }
            Ok((Statement::Rule(rule), span))
        }
    }
}

/// Parses a theory file: facts, rules, `#abducible` declarations and
/// `#ic` constraints, in any order.
pub fn parse_theory_named(file: &str, text: &str) -> Result<AbductiveTheory, ParseError> {
    let mut p = Parser::new(file, text)?;
    let mut rules: Vec<(Rule, SourceSpan)> = Vec::new();
    let mut abducibles = BTreeSet::new();
    let mut constraints = Vec::new();
    while !p.at_end() {
        match parse_statement(&mut p)? {
            (Statement::Rule(r), sp) => rules.push((r, sp)),
            (Statement::Abducible(a), _) => {
                abducibles.insert(a);
            }
            (Statement::Constraint(c), _) => constraints.push(c),
        }
    }
    for (r, sp) in &rules {
        if abducibles.contains(&r.head.pred()) && !r.is_fact() {
            return Err(ParseError::new(
                sp.clone(),
                format!(
                    "rule with abducible head predicate {} must be a ground fact",
                    r.head.pred()
                ),
            ));
        }
    }
    AbductiveTheory::new(
        rules.into_iter().map(|(r, _)| r).collect(),
        abducibles,
        constraints,
    )
    .map_err(|e| ParseError::new(SourceSpan::new(file, 1, 1, 1), e.to_string()))
}

pub fn parse_theory(text: &str) -> Result<AbductiveTheory, ParseError> {
    parse_theory_named("<theory>", text)
}

/// Parses an observation file: ground atoms terminated by `.`.
pub fn parse_observation_named(file: &str, text: &str) -> Result<Observation, ParseError> {
    let mut p = Parser::new(file, text)?;
    let mut atoms = BTreeSet::new();
    while !p.at_end() {
        let (g, _) = p.parse_ground_atom()?;
        p.expect(Tok::Dot)?;
        atoms.insert(g);
    }
    Ok(Observation { atoms })
}

pub fn parse_observation(text: &str) -> Result<Observation, ParseError> {
    parse_observation_named("<observation>", text)
}

/// Parses an explanation file: `#add atom.` / `#del atom.` lines.
/// Add and delete sets must be disjoint.
pub fn parse_explanation_named(file: &str, text: &str) -> Result<Explanation, ParseError> {
    let mut p = Parser::new(file, text)?;
    let mut add: BTreeMap<GroundAtom, SourceSpan> = BTreeMap::new();
    let mut del: BTreeMap<GroundAtom, SourceSpan> = BTreeMap::new();
    while !p.at_end() {
        let dir = p.next();
        match dir {
            Some((Tok::DirAdd, _)) => {
                let (g, sp) = p.parse_ground_atom()?;
                p.expect(Tok::Dot)?;
                if let Some(first) = del.get(&g) {
                    return Err(ParseError::new(
                        sp,
                        format!("atom `{}` both added and deleted (deleted at {})", g, first),
                    ));
                }
                add.insert(g, sp);
            }
            Some((Tok::DirDel, _)) => {
                let (g, sp) = p.parse_ground_atom()?;
                p.expect(Tok::Dot)?;
                if let Some(first) = add.get(&g) {
                    return Err(ParseError::new(
                        sp,
                        format!("atom `{}` both added and deleted (added at {})", g, first),
                    ));
                }
                del.insert(g, sp);
            }
            Some((t, sp)) => {
                return Err(ParseError::new(
                    sp,
                    format!("expected `#add` or `#del`, found {}", t),
                ))
            }
            None => break,
        }
    }
    Ok(Explanation {
        add: add.into_keys().collect(),
        del: del.into_keys().collect(),
    })
}

pub fn parse_explanation(text: &str) -> Result<Explanation, ParseError> {
    parse_explanation_named("<explanation>", text)
}

fn dimacs_err(file: &str, line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::new(SourceSpan::new(file, line.max(1), 1, 1), msg)
}

struct DimacsBody {
    num_vars: usize,
    num_clauses: usize,
    // raw literals with the line each clause ended on
    clauses: Vec<(Vec<i64>, usize)>,
    header_line: usize,
    quantifier_lines: Vec<(char, Vec<usize>, usize)>,
}

fn parse_dimacs_body(file: &str, text: &str) -> Result<DimacsBody, ParseError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut quantifier_lines = Vec::new();
    let mut clauses: Vec<(Vec<i64>, usize)> = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(dimacs_err(file, lineno, "duplicate problem line"));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(dimacs_err(
                    file,
                    lineno,
                    "malformed header, expected `p cnf <vars> <clauses>`",
                ));
            }
            let nv = parts[2]
                .parse::<usize>()
                .map_err(|_| dimacs_err(file, lineno, "malformed variable count in header"))?;
            let nc = parts[3]
                .parse::<usize>()
                .map_err(|_| dimacs_err(file, lineno, "malformed clause count in header"))?;
            header = Some((nv, nc, lineno));
            continue;
        }
        if line.starts_with('e') || line.starts_with('a') {
            if header.is_none() {
                return Err(dimacs_err(file, lineno, "quantifier line before header"));
            }
            if !clauses.is_empty() || !current.is_empty() {
                return Err(dimacs_err(file, lineno, "quantifier line after clauses"));
            }
            let kind = line.chars().next().unwrap();
            let mut vars = Vec::new();
            let mut terminated = false;
            for tok in line[1..].split_whitespace() {
                let v = tok
                    .parse::<i64>()
                    .map_err(|_| dimacs_err(file, lineno, "malformed quantifier line"))?;
                if v == 0 {
                    terminated = true;
                    break;
                }
                if v < 0 {
                    return Err(dimacs_err(
                        file,
                        lineno,
                        "negative variable in quantifier line",
                    ));
                }
                vars.push(v as usize);
            }
            if !terminated {
                return Err(dimacs_err(file, lineno, "quantifier line must end with 0"));
            }
            quantifier_lines.push((kind, vars, lineno));
            continue;
        }
        if header.is_none() {
            return Err(dimacs_err(file, lineno, "clause before header"));
        }
        for tok in line.split_whitespace() {
            let v = tok
                .parse::<i64>()
                .map_err(|_| dimacs_err(file, lineno, format!("malformed literal `{}`", tok)))?;
            if v == 0 {
                clauses.push((std::mem::take(&mut current), lineno));
            } else {
                current.push(v);
            }
        }
    }
    let (num_vars, num_clauses, header_line) =
        header.ok_or_else(|| dimacs_err(file, 1, "missing `p cnf` header"))?;
    if !current.is_empty() {
        return Err(dimacs_err(
            file,
            text.lines().count(),
            "unterminated clause at end of input",
        ));
    }
    Ok(DimacsBody {
        num_vars,
        num_clauses,
        clauses,
        header_line,
        quantifier_lines,
    })
}

/// Parses a DIMACS CNF file into a [`Cnf`] over variables y1..yn.
pub fn parse_dimacs_named(file: &str, text: &str) -> Result<Cnf, ParseError> {
    let body = parse_dimacs_body(file, text)?;
    if !body.quantifier_lines.is_empty() {
        let line = body.quantifier_lines[0].2;
        return Err(dimacs_err(file, line, "quantifier line in plain CNF input"));
    }
    if body.clauses.len() != body.num_clauses {
        return Err(dimacs_err(
            file,
            body.header_line,
            format!(
                "header declares {} clauses, found {}",
                body.num_clauses,
                body.clauses.len()
            ),
        ));
    }
    let mut clauses = Vec::with_capacity(body.clauses.len());
    for (lits, line) in body.clauses {
        let mut clause = Vec::with_capacity(lits.len());
        for l in lits {
            let var = l.unsigned_abs() as usize;
            if var > body.num_vars {
                return Err(dimacs_err(
                    file,
                    line,
                    format!(
                        "literal {} out of range, header declares {} variables",
                        l, body.num_vars
                    ),
                ));
            }
            clause.push(Lit {
                var,
                negated: l < 0,
            });
        }
        clauses.push(clause);
    }
    Ok(Cnf::new(body.num_vars, clauses))
}

pub fn parse_dimacs(text: &str) -> Result<Cnf, ParseError> {
    parse_dimacs_named("<dimacs>", text)
}

/// Parses a QDIMACS file whose prefix is an ∃ block followed by a ∀
/// block (either may be empty). Every variable of the header must be
/// quantified exactly once; other prefix shapes are rejected. The ∃
/// variables become x1..xk in listed order, the ∀ variables y1..yn.
pub fn parse_qdimacs_named(file: &str, text: &str) -> Result<QbfCnf, ParseError> {
    let body = parse_dimacs_body(file, text)?;
    if body.clauses.len() != body.num_clauses {
        return Err(dimacs_err(
            file,
            body.header_line,
            format!(
                "header declares {} clauses, found {}",
                body.num_clauses,
                body.clauses.len()
            ),
        ));
    }
    let mut exists: Vec<usize> = Vec::new();
    let mut foralls: Vec<usize> = Vec::new();
    let mut seen_forall = false;
    for (kind, vars, line) in &body.quantifier_lines {
        match kind {
            'e' => {
                if seen_forall {
                    return Err(dimacs_err(
                        file,
                        *line,
                        "unsupported quantifier pattern: ∃ block after ∀ block",
                    ));
                }
                exists.extend(vars);
            }
            'a' => {
                seen_forall = true;
                foralls.extend(vars);
            }
            _ => unreachable!(),
        }
    }
    let mut var_map: BTreeMap<usize, QbfVar> = BTreeMap::new();
    for (i, v) in exists.iter().enumerate() {
        if *v > body.num_vars {
            return Err(dimacs_err(
                file,
                body.header_line,
                format!("quantified variable {} out of range", v),
            ));
        }
        if var_map.insert(*v, QbfVar::X(i + 1)).is_some() {
            return Err(dimacs_err(
                file,
                body.header_line,
                format!("variable {} quantified twice", v),
            ));
        }
    }
    for (i, v) in foralls.iter().enumerate() {
        if *v > body.num_vars {
            return Err(dimacs_err(
                file,
                body.header_line,
                format!("quantified variable {} out of range", v),
            ));
        }
        if var_map.insert(*v, QbfVar::Y(i + 1)).is_some() {
            return Err(dimacs_err(
                file,
                body.header_line,
                format!("variable {} quantified twice", v),
            ));
        }
    }
    for v in 1..=body.num_vars {
        if !var_map.contains_key(&v) {
            return Err(dimacs_err(
                file,
                body.header_line,
                format!(
                    "unsupported quantifier pattern: variable {} is unquantified",
                    v
                ),
            ));
        }
    }
    let mut clauses = Vec::with_capacity(body.clauses.len());
    for (lits, line) in body.clauses {
        let mut clause = Vec::with_capacity(lits.len());
        for l in lits {
            let var = l.unsigned_abs() as usize;
            match var_map.get(&var) {
                Some(qv) => clause.push(QbfLit::new(*qv, l < 0)),
                None => {
                    return Err(dimacs_err(
                        file,
                        line,
                        format!(
                            "literal {} out of range, header declares {} variables",
                            l, body.num_vars
                        ),
                    ))
                }
            }
        }
        clauses.push(clause);
    }
    Ok(QbfCnf {
        num_x: exists.len(),
        num_y: foralls.len(),
        clauses,
    })
}

pub fn parse_qdimacs(text: &str) -> Result<QbfCnf, ParseError> {
    parse_qdimacs_named("<qdimacs>", text)
}
