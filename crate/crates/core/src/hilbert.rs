//! Hilbert-style axiom systems, derivation checking and the constructive
//! deduction theorem.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{parse, parse_schema, Connective, Formula, Language, ParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SystemId {
    #[serde(rename = "D2-MINUS")]
    D2Minus,
    #[serde(rename = "D2-PLUS")]
    D2Plus,
    #[serde(rename = "D2-LEFT")]
    D2Left,
    #[serde(rename = "D2-NC")]
    D2Nc,
    #[serde(rename = "D2-DN")]
    D2Dn,
}

impl SystemId {
    pub const ALL: [SystemId; 5] = [
        SystemId::D2Minus,
        SystemId::D2Plus,
        SystemId::D2Left,
        SystemId::D2Nc,
        SystemId::D2Dn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SystemId::D2Minus => "D2-MINUS",
            SystemId::D2Plus => "D2-PLUS",
            SystemId::D2Left => "D2-LEFT",
            SystemId::D2Nc => "D2-NC",
            SystemId::D2Dn => "D2-DN",
        }
    }

    pub fn language(self) -> Language {
        match self {
            SystemId::D2Minus => Language::RightMinus,
            SystemId::D2Plus => Language::Right,
            SystemId::D2Left => Language::LeftMinus,
            SystemId::D2Nc => Language::NegCond,
            SystemId::D2Dn => Language::DiscussiveNeg,
        }
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SystemId {
    type Err = HilbertError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SystemId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| HilbertError::UnknownSystem(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HilbertError {
    #[error("unknown axiom system `{0}`")]
    UnknownSystem(String),
    #[error("input derivation is invalid at line {line}: {reason}")]
    InvalidInput { line: usize, reason: InvalidReason },
    #[error("`{0}` is not a premise of the derivation")]
    NotAPremise(String),
    #[error("derivation has no lines")]
    Empty,
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
}

/// A named axiom schema.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    pub name: String,
    pub formula: Formula,
}

/// Axiom schemata plus modus ponens.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomSystem {
    pub id: SystemId,
    pub language: Language,
    pub schemata: Vec<Schema>,
}

impl AxiomSystem {
    pub fn schema(&self, name: &str) -> Option<&Schema> {
        self.schemata.iter().find(|s| s.name.eq_ignore_ascii_case(name))
    }

    /// First schema (registry order) that `f` is an instance of.
    pub fn find_schema(&self, f: &Formula) -> Option<(&Schema, BTreeMap<String, Formula>)> {
        self.schemata
            .iter()
            .find_map(|s| match_schema(&s.formula, f).map(|m| (s, m)))
    }
}

fn schema(name: &str, text: &str, lang: Language) -> Schema {
    Schema {
        name: name.to_string(),
        formula: parse_schema(text, lang).expect("registry schema parses"),
    }
}

const AX1: &str = "A -> (B -> A)";
const AX2: &str = "(A -> (B -> C)) -> ((A -> B) -> (A -> C))";
const AX3: &str = "((A -> B) -> A) -> A";

/// Returns the registry entry for `id`.
pub fn list_system(id: SystemId) -> AxiomSystem {
    let lang = id.language();
    let s = |name: &str, text: &str| schema(name, text, lang);
    let schemata = match id {
        SystemId::D2Minus => d2_minus(),
        SystemId::D2Plus => {
            let mut v = d2_minus();
            v.extend([
                s("Ax13", "A -> A | B"),
                s("Ax14", "B -> A | B"),
                s("Ax15", "(A -> C) -> ((B -> C) -> (A | B -> C))"),
                s("Ax16", "~(A | B) <-> ~A &r ~B"),
            ]);
            v
        }
        SystemId::D2Left => d2_minus()
            .into_iter()
            .map(|sc| {
                if sc.name == "Ax9" {
                    s("Ax9'", "~(A &l B) <-> (A -> ~B)")
                } else {
                    Schema {
                        name: sc.name,
                        formula: sc.formula.replace_connective(Connective::ConjR, Connective::ConjL),
                    }
                }
            })
            .collect(),
        SystemId::D2Nc => vec![
            s("Ax1", AX1),
            s("Ax2", AX2),
            s("Ax3", AX3),
            s("Ax7", "(~A -> A) -> A"),
            s("Ax8.1", "~~A -> A"),
            s("Ax8.2", "A -> ~~A"),
            s("Ax10.1", "~(A -> B) -> A"),
            s("Ax10.2", "~(A -> B) -> ~B"),
            s("Ax10.3", "A -> (~B -> ~(A -> B))"),
        ],
        SystemId::D2Dn => d2_minus()
            .into_iter()
            .map(|sc| {
                if sc.name == "Ax8" {
                    s("Ax8'", "~d A -> (~d ~d A -> B)")
                } else {
                    Schema {
                        name: sc.name,
                        formula: sc.formula.replace_connective(Connective::Neg, Connective::DNeg),
                    }
                }
            })
            .collect(),
    };
    AxiomSystem {
        id,
        language: lang,
        schemata,
    }
}

fn d2_minus() -> Vec<Schema> {
    let lang = Language::RightMinus;
    let s = |name: &str, text: &str| schema(name, text, lang);
    vec![
        s("Ax1", AX1),
        s("Ax2", AX2),
        s("Ax3", AX3),
        s("Ax4", "A &r B -> A"),
        s("Ax5", "A &r B -> B"),
        s("Ax6", "(C -> A) -> ((C -> B) -> (C -> A &r B))"),
        s("Ax7", "(~A -> A) -> A"),
        s("Ax8", "~~A <-> A"),
        s("Ax9", "~(A &r B) <-> (B -> ~A)"),
        s("Ax10", "~(A -> B) <-> A &r ~B"),
    ]
}

/// Most general substitution making `schema` equal to `f`, if any.
pub fn match_schema(schema: &Formula, f: &Formula) -> Option<BTreeMap<String, Formula>> {
    fn go(s: &Formula, f: &Formula, map: &mut BTreeMap<String, Formula>) -> bool {
        match (s, f) {
            (Formula::Meta(m), _) => match map.get(m) {
                Some(bound) => bound == f,
                None => {
                    map.insert(m.clone(), f.clone());
                    true
                }
            },
            (Formula::Atom(a), Formula::Atom(b)) => a == b,
            (Formula::Unary(c, a), Formula::Unary(d, b)) => c == d && go(a, b, map),
            (Formula::Binary(c, a1, a2), Formula::Binary(d, b1, b2)) => c == d && go(a1, b1, map) && go(a2, b2, map),
            _ => false,
        }
    }
    let mut map = BTreeMap::new();
    go(schema, f, &mut map).then_some(map)
}

/// Why a derivation line is rejected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvalidReason {
    NotAPremise,
    NoSchemaMatch,
    BadMpReference,
    MpShapeMismatch,
    WrongLanguage,
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InvalidReason::NotAPremise => "not-a-premise",
            InvalidReason::NoSchemaMatch => "no-schema-match",
            InvalidReason::BadMpReference => "bad-mp-reference",
            InvalidReason::MpShapeMismatch => "mp-shape-mismatch",
            InvalidReason::WrongLanguage => "wrong-language",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Justification {
    Premise,
    /// Axiom instance; the schema is found automatically when `None`.
    Axiom(Option<String>),
    /// `Mp(i, j)`: line `j` is `line_i -> this`. Lines count from 1.
    Mp(usize, usize),
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Premise => f.write_str("premise"),
            Justification::Axiom(None) => f.write_str("axiom"),
            Justification::Axiom(Some(name)) => f.write_str(&name.to_ascii_lowercase()),
            Justification::Mp(i, j) => write!(f, "mp {i} {j}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub formula: Formula,
    pub justification: Justification,
}

impl Line {
    pub fn new(formula: Formula, justification: Justification) -> Self {
        Line { formula, justification }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub system: SystemId,
    pub premises: Vec<Formula>,
    pub lines: Vec<Line>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DerivationVerdict {
    Valid { conclusion: Formula },
    Invalid { line: usize, reason: InvalidReason },
}

impl DerivationVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, DerivationVerdict::Valid { .. })
    }
}

impl fmt::Display for DerivationVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivationVerdict::Valid { conclusion } => write!(f, "VALID\nconclusion: {conclusion}"),
            DerivationVerdict::Invalid { line, reason } => write!(f, "INVALID\nline {line}: {reason}"),
        }
    }
}

/// Checks every line against the system's schemata, the premises and MP.
pub fn check_derivation(d: &Derivation) -> Result<DerivationVerdict, HilbertError> {
    if d.lines.is_empty() {
        return Err(HilbertError::Empty);
    }
    let system = list_system(d.system);
    for (k, line) in d.lines.iter().enumerate() {
        let n = k + 1;
        let bad = |reason| Ok(DerivationVerdict::Invalid { line: n, reason });
        if system.language.admits(&line.formula).is_err() || !line.formula.metas().is_empty() {
            return bad(InvalidReason::WrongLanguage);
        }
        match &line.justification {
            Justification::Premise => {
                if !d.premises.contains(&line.formula) {
                    return bad(InvalidReason::NotAPremise);
                }
            }
            Justification::Axiom(name) => {
                let ok = match name {
                    Some(name) => system
                        .schema(name)
                        .is_some_and(|s| match_schema(&s.formula, &line.formula).is_some()),
                    None => system.find_schema(&line.formula).is_some(),
                };
                if !ok {
                    return bad(InvalidReason::NoSchemaMatch);
                }
            }
            Justification::Mp(i, j) => {
                if *i == 0 || *j == 0 || *i >= n || *j >= n {
                    return bad(InvalidReason::BadMpReference);
                }
                let minor = &d.lines[i - 1].formula;
                let shaped = d.lines[j - 1]
                    .formula
                    .as_imp()
                    .is_some_and(|(a, b)| a == minor && *b == line.formula);
                if !shaped {
                    return bad(InvalidReason::MpShapeMismatch);
                }
            }
        }
    }
    Ok(DerivationVerdict::Valid {
        conclusion: d.lines.last().expect("nonempty").formula.clone(),
    })
}

/// Turns a derivation of `B` from `Γ ∪ {A}` into one of `A -> B` from `Γ`.
pub fn deduction_transform(d: &Derivation, dischargee: &Formula) -> Result<Derivation, HilbertError> {
    if let DerivationVerdict::Invalid { line, reason } = check_derivation(d)? {
        return Err(HilbertError::InvalidInput { line, reason });
    }
    if !d.premises.contains(dischargee) {
        return Err(HilbertError::NotAPremise(dischargee.to_string()));
    }
    let a = dischargee;
    let imp = |x: &Formula, y: &Formula| Formula::imp(x.clone(), y.clone());
    let mut out: Vec<Line> = Vec::new();
    let push = |out: &mut Vec<Line>, f: Formula, j: Justification| {
        out.push(Line::new(f, j));
        out.len()
    };
    let ax = |name: &str| Justification::Axiom(Some(name.to_string()));
    // index (1-based, in `out`) of `A -> B_k` for every input line k
    let mut target: Vec<usize> = Vec::with_capacity(d.lines.len());

    for line in &d.lines {
        let b = &line.formula;
        let idx = if b == a {
            // A -> A from Ax1, Ax2 and MP.
            let aa = imp(a, a);
            let l1 = push(&mut out, imp(a, &imp(&aa, a)), ax("Ax1"));
            let l2 = push(&mut out, imp(&imp(a, &imp(&aa, a)), &imp(&imp(a, &aa), &aa)), ax("Ax2"));
            let l3 = push(&mut out, imp(&imp(a, &aa), &aa), Justification::Mp(l1, l2));
            let l4 = push(&mut out, imp(a, &aa), ax("Ax1"));
            push(&mut out, aa.clone(), Justification::Mp(l4, l3))
        } else {
            match &line.justification {
                Justification::Premise | Justification::Axiom(_) => {
                    let l1 = push(&mut out, b.clone(), line.justification.clone());
                    let l2 = push(&mut out, imp(b, &imp(a, b)), ax("Ax1"));
                    push(&mut out, imp(a, b), Justification::Mp(l1, l2))
                }
                Justification::Mp(i, j) => {
                    let c = &d.lines[i - 1].formula;
                    let a_c = target[i - 1];
                    let a_cb = target[j - 1];
                    let l1 = push(
                        &mut out,
                        imp(&imp(a, &imp(c, b)), &imp(&imp(a, c), &imp(a, b))),
                        ax("Ax2"),
                    );
                    let l2 = push(&mut out, imp(&imp(a, c), &imp(a, b)), Justification::Mp(a_cb, l1));
                    push(&mut out, imp(a, b), Justification::Mp(a_c, l2))
                }
            }
        };
        target.push(idx);
    }

    // Keep only the lines the final implication depends on.
    let last = *target.last().expect("nonempty");
    let mut needed = vec![false; out.len() + 1];
    needed[last] = true;
    for k in (1..=out.len()).rev() {
        if needed[k] {
            if let Justification::Mp(i, j) = out[k - 1].justification {
                needed[i] = true;
                needed[j] = true;
            }
        }
    }
    let mut renumber = vec![0; out.len() + 1];
    let mut lines = Vec::new();
    for (k, line) in out.into_iter().enumerate() {
        if needed[k + 1] {
            let justification = match line.justification {
                Justification::Mp(i, j) => Justification::Mp(renumber[i], renumber[j]),
                other => other,
            };
            lines.push(Line::new(line.formula, justification));
            renumber[k + 1] = lines.len();
        }
    }
    Ok(Derivation {
        system: d.system,
        premises: d.premises.iter().filter(|p| *p != a).cloned().collect(),
        lines,
    })
}

impl Derivation {
    /// Reads the text format:
    ///
    /// ```text
    /// system: D2-MINUS
    /// premises: p ; p -> q
    /// 1. p        [premise]
    /// 2. p -> q   [premise]
    /// 3. q        [mp 1 2]
    /// ```
    ///
    /// `[axN]` names a schema, `[axiom]` lets the checker find one. Blank
    /// lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Derivation, HilbertError> {
        let mut system = None;
        let mut premises = None;
        let mut lines = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let n = k + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let format = |message: String| HilbertError::Format { line: n, message };
            if let Some(rest) = body.strip_prefix("system:") {
                system = Some(rest.trim().parse::<SystemId>()?);
            } else if let Some(rest) = body.strip_prefix("premises:") {
                let lang = system
                    .ok_or_else(|| format("`system:` must come before `premises:`".into()))?
                    .language();
                let list = rest
                    .split(';')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| parse(s, lang).map_err(|source| HilbertError::Parse { line: n, source }))
                    .collect::<Result<Vec<_>, _>>()?;
                premises = Some(list);
            } else {
                let lang = system
                    .ok_or_else(|| format("`system:` header missing".into()))?
                    .language();
                let (num, rest) = body
                    .split_once('.')
                    .ok_or_else(|| format("expected `<n>. <formula> [justification]`".into()))?;
                let num: usize = num
                    .trim()
                    .parse()
                    .map_err(|_| format(format!("bad line number `{}`", num.trim())))?;
                if num != lines.len() + 1 {
                    return Err(format(format!("expected line number {}, found {num}", lines.len() + 1)));
                }
                let open = rest
                    .rfind('[')
                    .ok_or_else(|| format("missing `[justification]`".into()))?;
                let close = rest[open..]
                    .find(']')
                    .map(|c| open + c)
                    .ok_or_else(|| format("unclosed `[`".into()))?;
                if !rest[close + 1..].trim().is_empty() {
                    return Err(format("unexpected text after `]`".into()));
                }
                let formula =
                    parse(rest[..open].trim(), lang).map_err(|source| HilbertError::Parse { line: n, source })?;
                let justification = parse_justification(&rest[open + 1..close]).map_err(format)?;
                lines.push(Line::new(formula, justification));
            }
        }
        let system = system.ok_or_else(|| HilbertError::Format {
            line: 0,
            message: "`system:` header missing".into(),
        })?;
        if lines.is_empty() {
            return Err(HilbertError::Empty);
        }
        Ok(Derivation {
            system,
            premises: premises.unwrap_or_default(),
            lines,
        })
    }
}

fn parse_justification(s: &str) -> Result<Justification, String> {
    let words: Vec<&str> = s.split_whitespace().collect();
    match words.as_slice() {
        ["premise"] => Ok(Justification::Premise),
        ["axiom"] => Ok(Justification::Axiom(None)),
        ["mp", i, j] => {
            let num = |x: &str| x.parse::<usize>().map_err(|_| format!("bad mp reference `{x}`"));
            Ok(Justification::Mp(num(i)?, num(j)?))
        }
        [name] if name.len() > 2 && name[..2].eq_ignore_ascii_case("ax") => {
            Ok(Justification::Axiom(Some(format!("Ax{}", &name[2..]))))
        }
        _ => Err(format!("unknown justification `{s}`")),
    }
}

/// Writes the text format accepted by [`Derivation::parse`].
impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "system: {}", self.system)?;
        let premises: Vec<String> = self.premises.iter().map(ToString::to_string).collect();
        writeln!(f, "premises: {}", premises.join(" ; "))?;
        for (k, line) in self.lines.iter().enumerate() {
            writeln!(f, "{}. {}  [{}]", k + 1, line.formula, line.justification)?;
        }
        Ok(())
    }
}
