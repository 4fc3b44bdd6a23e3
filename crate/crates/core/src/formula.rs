//! Formula syntax shared by every semantics and proof system in the crate.
//!
//! A [`Formula`] is a plain tree over the primitive connectives. Which
//! connectives are allowed is decided by a [`Language`]; the tree itself is
//! language-agnostic and every evaluator checks admissibility at its boundary.
//!
//! Schemata (axiom templates) use the same tree with [`Formula::Meta`] leaves.
//! Metavariables are uppercase identifiers, object variables lowercase.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Primitive connectives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Connective {
    /// `~`, pointwise negation.
    Neg,
    /// `~d`, discussive negation.
    DNeg,
    /// `->`, discussive implication.
    Imp,
    /// `&r`, right discussive conjunction.
    ConjR,
    /// `&l`, left discussive conjunction.
    ConjL,
    /// `&`, classical conjunction.
    Conj,
    /// `|`, classical disjunction.
    Disj,
}

impl Connective {
    pub const ALL: [Connective; 7] = [
        Connective::Neg,
        Connective::DNeg,
        Connective::Imp,
        Connective::ConjR,
        Connective::ConjL,
        Connective::Conj,
        Connective::Disj,
    ];

    pub fn arity(self) -> usize {
        match self {
            Connective::Neg | Connective::DNeg => 1,
            _ => 2,
        }
    }

    /// ASCII token used by the parser and printer.
    pub fn token(self) -> &'static str {
        match self {
            Connective::Neg => "~",
            Connective::DNeg => "~d",
            Connective::Imp => "->",
            Connective::ConjR => "&r",
            Connective::ConjL => "&l",
            Connective::Conj => "&",
            Connective::Disj => "|",
        }
    }

    /// Binding strength, larger binds tighter.
    fn precedence(self) -> u8 {
        match self {
            Connective::Neg | Connective::DNeg => 4,
            Connective::ConjR | Connective::ConjL | Connective::Conj => 3,
            Connective::Disj => 2,
            Connective::Imp => 1,
        }
    }
}

impl fmt::Display for Connective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// The propositional languages, each a fixed connective signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Language {
    /// `{~, ->, &, |}`
    #[serde(rename = "L")]
    L,
    /// `{~, ->, &r}`
    #[serde(rename = "Lr-")]
    RightMinus,
    /// `{~, ->, &r, |}`
    #[serde(rename = "Lr")]
    Right,
    /// `{~, ->, &l}`
    #[serde(rename = "Ll-")]
    LeftMinus,
    /// `{~, ->, &l, |}`
    #[serde(rename = "Ll")]
    Left,
    /// `{~, ->}`
    #[serde(rename = "L-NC")]
    NegCond,
    /// `{~d, ->, &r}`
    #[serde(rename = "L-DN")]
    DiscussiveNeg,
    /// `{~, &, |}`
    #[serde(rename = "L-FDE")]
    Fde,
}

impl Language {
    pub const ALL: [Language; 8] = [
        Language::L,
        Language::RightMinus,
        Language::Right,
        Language::LeftMinus,
        Language::Left,
        Language::NegCond,
        Language::DiscussiveNeg,
        Language::Fde,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Language::L => "L",
            Language::RightMinus => "Lr-",
            Language::Right => "Lr",
            Language::LeftMinus => "Ll-",
            Language::Left => "Ll",
            Language::NegCond => "L-NC",
            Language::DiscussiveNeg => "L-DN",
            Language::Fde => "L-FDE",
        }
    }

    pub fn connectives(self) -> &'static [Connective] {
        use Connective::*;
        match self {
            Language::L => &[Neg, Imp, Conj, Disj],
            Language::RightMinus => &[Neg, Imp, ConjR],
            Language::Right => &[Neg, Imp, ConjR, Disj],
            Language::LeftMinus => &[Neg, Imp, ConjL],
            Language::Left => &[Neg, Imp, ConjL, Disj],
            Language::NegCond => &[Neg, Imp],
            Language::DiscussiveNeg => &[DNeg, Imp, ConjR],
            Language::Fde => &[Neg, Conj, Disj],
        }
    }

    pub fn contains(self, c: Connective) -> bool {
        self.connectives().contains(&c)
    }

    /// The conjunction `<->` expands through, if the language has one.
    pub fn biconditional_conjunction(self) -> Option<Connective> {
        if self.contains(Connective::ConjR) {
            Some(Connective::ConjR)
        } else if self.contains(Connective::ConjL) {
            Some(Connective::ConjL)
        } else {
            None
        }
    }

    /// `(a -> b) & (b -> a)` with the language's discussive conjunction.
    pub fn biconditional(self, a: Formula, b: Formula) -> Option<Formula> {
        let conj = self.biconditional_conjunction()?;
        if !self.contains(Connective::Imp) {
            return None;
        }
        Some(Formula::binary(
            conj,
            Formula::imp(a.clone(), b.clone()),
            Formula::imp(b, a),
        ))
    }

    /// Checks that `f` only uses connectives of this language.
    pub fn admits(self, f: &Formula) -> Result<(), Connective> {
        match f.connectives().into_iter().find(|c| !self.contains(*c)) {
            Some(c) => Err(c),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown language `{0}` (expected one of L, Lr-, Lr, Ll-, Ll, L-NC, L-DN, L-FDE)")]
pub struct UnknownLanguage(pub String);

impl FromStr for Language {
    type Err = UnknownLanguage;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Language::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| UnknownLanguage(s.to_string()))
    }
}

/// A formula tree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    /// Object variable, `[a-z][a-z0-9_]*`.
    Atom(String),
    /// Schema metavariable, `[A-Z][A-Z0-9_]*`.
    Meta(String),
    Unary(Connective, Box<Formula>),
    Binary(Connective, Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn meta(name: impl Into<String>) -> Self {
        Formula::Meta(name.into())
    }

    pub fn unary(c: Connective, f: Formula) -> Self {
        debug_assert_eq!(c.arity(), 1);
        Formula::Unary(c, Box::new(f))
    }

    pub fn binary(c: Connective, l: Formula, r: Formula) -> Self {
        debug_assert_eq!(c.arity(), 2);
        Formula::Binary(c, Box::new(l), Box::new(r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(f: Formula) -> Self {
        Self::unary(Connective::Neg, f)
    }

    pub fn dneg(f: Formula) -> Self {
        Self::unary(Connective::DNeg, f)
    }

    pub fn imp(l: Formula, r: Formula) -> Self {
        Self::binary(Connective::Imp, l, r)
    }

    pub fn conj_r(l: Formula, r: Formula) -> Self {
        Self::binary(Connective::ConjR, l, r)
    }

    pub fn conj_l(l: Formula, r: Formula) -> Self {
        Self::binary(Connective::ConjL, l, r)
    }

    pub fn conj(l: Formula, r: Formula) -> Self {
        Self::binary(Connective::Conj, l, r)
    }

    pub fn disj(l: Formula, r: Formula) -> Self {
        Self::binary(Connective::Disj, l, r)
    }

    /// Splits `a -> b` into its antecedent and consequent.
    pub fn as_imp(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Binary(Connective::Imp, l, r) => Some((l, r)),
            _ => None,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Meta(_) => 0,
            Formula::Unary(_, f) => 1 + f.depth(),
            Formula::Binary(_, l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Object variables, sorted.
    pub fn vars(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_leaves(&mut out, false);
        out
    }

    /// Metavariables, sorted.
    pub fn metas(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_leaves(&mut out, true);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut BTreeSet<&'a str>, meta: bool) {
        match self {
            Formula::Atom(n) if !meta => {
                out.insert(n);
            }
            Formula::Meta(n) if meta => {
                out.insert(n);
            }
            Formula::Atom(_) | Formula::Meta(_) => {}
            Formula::Unary(_, f) => f.collect_leaves(out, meta),
            Formula::Binary(_, l, r) => {
                l.collect_leaves(out, meta);
                r.collect_leaves(out, meta);
            }
        }
    }

    pub fn connectives(&self) -> BTreeSet<Connective> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            match f {
                Formula::Atom(_) | Formula::Meta(_) => {}
                Formula::Unary(c, a) => {
                    out.insert(*c);
                    stack.push(a);
                }
                Formula::Binary(c, a, b) => {
                    out.insert(*c);
                    stack.push(a);
                    stack.push(b);
                }
            }
        }
        out
    }

    /// All distinct subtrees in post-order, first occurrence kept.
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        self.push_subformulas(&mut seen, &mut out);
        out
    }

    fn push_subformulas<'a>(&'a self, seen: &mut HashSet<&'a Formula>, out: &mut Vec<&'a Formula>) {
        match self {
            Formula::Atom(_) | Formula::Meta(_) => {}
            Formula::Unary(_, f) => f.push_subformulas(seen, out),
            Formula::Binary(_, l, r) => {
                l.push_subformulas(seen, out);
                r.push_subformulas(seen, out);
            }
        }
        if seen.insert(self) {
            out.push(self);
        }
    }

    /// Simultaneous substitution of formulas for metavariables.
    pub fn substitute(&self, map: &BTreeMap<String, Formula>) -> Result<Formula, SubstitutionError> {
        Ok(match self {
            Formula::Atom(_) => self.clone(),
            Formula::Meta(m) => map
                .get(m)
                .cloned()
                .ok_or_else(|| SubstitutionError::Unmapped(m.clone()))?,
            Formula::Unary(c, f) => Formula::unary(*c, f.substitute(map)?),
            Formula::Binary(c, l, r) => Formula::binary(*c, l.substitute(map)?, r.substitute(map)?),
        })
    }

    /// Replaces every occurrence of connective `from` by `to` (same arity).
    pub fn replace_connective(&self, from: Connective, to: Connective) -> Formula {
        debug_assert_eq!(from.arity(), to.arity());
        let swap = |c: Connective| if c == from { to } else { c };
        match self {
            Formula::Atom(_) | Formula::Meta(_) => self.clone(),
            Formula::Unary(c, f) => Formula::unary(swap(*c), f.replace_connective(from, to)),
            Formula::Binary(c, l, r) => {
                Formula::binary(swap(*c), l.replace_connective(from, to), r.replace_connective(from, to))
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Atom(_) | Formula::Meta(_) => 5,
            Formula::Unary(c, _) | Formula::Binary(c, _, _) => c.precedence(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstitutionError {
    #[error("metavariable `{0}` has no substitution")]
    Unmapped(String),
}

/// Minimal-parentheses rendering; `parse(&f.to_string(), lang)` gives back `f`.
///
/// Conjunctions and `|` associate to the left, `->` to the right.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(n) | Formula::Meta(n) => f.write_str(n),
            Formula::Unary(c, child) => {
                let wrap = child.precedence() < c.precedence();
                f.write_str(c.token())?;
                match (c, &**child) {
                    // `~d` would lex as discussive negation.
                    (Connective::Neg, Formula::Atom(n)) if n == "d" => f.write_str(" ")?,
                    (Connective::DNeg, _) if !wrap => f.write_str(" ")?,
                    _ => {}
                }
                write_operand(f, child, wrap)
            }
            Formula::Binary(c, l, r) => {
                let p = c.precedence();
                let (wrap_l, wrap_r) = if *c == Connective::Imp {
                    (l.precedence() <= p, r.precedence() < p)
                } else {
                    (l.precedence() < p, r.precedence() <= p)
                };
                write_operand(f, l, wrap_l)?;
                write!(f, " {} ", c.token())?;
                write_operand(f, r, wrap_r)
            }
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, child: &Formula, wrap: bool) -> fmt::Result {
    if wrap {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("connective `{token}` at byte {offset} is not in language {language}")]
    NotInLanguage {
        token: String,
        offset: usize,
        language: Language,
    },
    #[error("metavariable `{name}` at byte {offset} is not allowed in an object formula")]
    MetavariableNotAllowed { name: String, offset: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Atom(String),
    Meta(String),
    Conn(Connective),
    Iff,
    LParen,
    RParen,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Atom(n) | Token::Meta(n) => format!("`{n}`"),
            Token::Conn(c) => format!("`{c}`"),
            Token::Iff => "`<->`".to_string(),
            Token::LParen => "`(`".to_string(),
            Token::RParen => "`)`".to_string(),
        }
    }
}

fn is_ident_char(b: u8) -> bool {
    b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_'
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    // A letter suffix (`~d`, `&r`, `&l`) only belongs to the operator when it
    // is not the start of an identifier: `~dp` is `~` applied to `dp`.
    let suffix = |i: usize, ch: u8| bytes.get(i) == Some(&ch) && !bytes.get(i + 1).copied().is_some_and(is_ident_char);
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => {
                out.push((start, Token::LParen));
                i += 1;
            }
            b')' => {
                out.push((start, Token::RParen));
                i += 1;
            }
            b'~' => {
                if suffix(i + 1, b'd') {
                    out.push((start, Token::Conn(Connective::DNeg)));
                    i += 2;
                } else {
                    out.push((start, Token::Conn(Connective::Neg)));
                    i += 1;
                }
            }
            b'&' => {
                if suffix(i + 1, b'r') {
                    out.push((start, Token::Conn(Connective::ConjR)));
                    i += 2;
                } else if suffix(i + 1, b'l') {
                    out.push((start, Token::Conn(Connective::ConjL)));
                    i += 2;
                } else {
                    out.push((start, Token::Conn(Connective::Conj)));
                    i += 1;
                }
            }
            b'|' => {
                out.push((start, Token::Conn(Connective::Disj)));
                i += 1;
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push((start, Token::Conn(Connective::Imp)));
                i += 2;
            }
            b'<' if bytes[i..].starts_with(b"<->") => {
                out.push((start, Token::Iff));
                i += 3;
            }
            b'a'..=b'z' => {
                while i < bytes.len() && is_ident_char(bytes[i]) {
                    i += 1;
                }
                out.push((start, Token::Atom(text[start..i].to_string())));
            }
            b'A'..=b'Z' => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_uppercase() || bytes[i].is_ascii_digit() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Token::Meta(text[start..i].to_string())));
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    offset: start,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    lang: Language,
    allow_meta: bool,
    _text: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn check_lang(&self, c: Connective) -> Result<(), ParseError> {
        if self.lang.contains(c) {
            Ok(())
        } else {
            Err(ParseError::NotInLanguage {
                token: c.token().to_string(),
                offset: self.offset(),
                language: self.lang,
            })
        }
    }

    fn biconditional(&mut self) -> Result<Formula, ParseError> {
        let left = self.implication()?;
        if self.peek() == Some(&Token::Iff) {
            if self.lang.biconditional_conjunction().is_none() {
                return Err(ParseError::NotInLanguage {
                    token: "<->".to_string(),
                    offset: self.offset(),
                    language: self.lang,
                });
            }
            self.pos += 1;
            let right = self.biconditional()?;
            return Ok(self.lang.biconditional(left, right).expect("checked above"));
        }
        Ok(left)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let left = self.disjunction()?;
        if self.peek() == Some(&Token::Conn(Connective::Imp)) {
            self.check_lang(Connective::Imp)?;
            self.pos += 1;
            let right = self.implication()?;
            return Ok(Formula::imp(left, right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.conjunction()?;
        while self.peek() == Some(&Token::Conn(Connective::Disj)) {
            self.check_lang(Connective::Disj)?;
            self.pos += 1;
            let right = self.conjunction()?;
            left = Formula::disj(left, right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.unary()?;
        while let Some(Token::Conn(c @ (Connective::ConjR | Connective::ConjL | Connective::Conj))) = self.peek() {
            let c = *c;
            self.check_lang(c)?;
            self.pos += 1;
            let right = self.unary()?;
            left = Formula::binary(c, left, right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let offset = self.offset();
        match self.peek().cloned() {
            Some(Token::Conn(c @ (Connective::Neg | Connective::DNeg))) => {
                self.check_lang(c)?;
                self.pos += 1;
                Ok(Formula::unary(c, self.unary()?))
            }
            Some(Token::Atom(n)) => {
                self.pos += 1;
                Ok(Formula::Atom(n))
            }
            Some(Token::Meta(n)) => {
                if !self.allow_meta {
                    return Err(ParseError::MetavariableNotAllowed { name: n, offset });
                }
                self.pos += 1;
                Ok(Formula::Meta(n))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.biconditional()?;
                if self.peek() != Some(&Token::RParen) {
                    return self.syntax("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(t) => self.syntax(format!("expected a formula, found {}", t.describe())),
            None => self.syntax("unexpected end of input"),
        }
    }
}

fn parse_with(text: &str, lang: Language, allow_meta: bool) -> Result<Formula, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        end: text.len(),
        lang,
        allow_meta,
        _text: text,
    };
    let f = p.biconditional()?;
    if let Some(t) = p.peek() {
        let d = t.describe();
        return p.syntax(format!("unexpected {d} after complete formula"));
    }
    Ok(f)
}

/// Parses an object formula of `lang`. `<->` is expanded on the fly.
pub fn parse(text: &str, lang: Language) -> Result<Formula, ParseError> {
    parse_with(text, lang, false)
}

/// Like [`parse`] but also accepts uppercase metavariables.
pub fn parse_schema(text: &str, lang: Language) -> Result<Formula, ParseError> {
    parse_with(text, lang, true)
}
