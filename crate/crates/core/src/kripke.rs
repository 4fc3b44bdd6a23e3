//! Discussive Kripke models, Routley star models and bounded countermodel
//! search over both.
//!
//! Worlds are numbered `w1..wk`. The truth set of a formula is kept as a
//! bitmask over worlds, so every connective is a handful of word operations:
//!
//! | connective | true at `w` iff                                  |
//! |------------|--------------------------------------------------|
//! | `~A`       | `A` false at `w` (Routley: `A` false at `w*`)   |
//! | `~d A`     | `A` false at some world                          |
//! | `A -> B`   | `A` false at every world, or `B` true at `w`     |
//! | `A &r B`   | `A` true at `w` and `B` true at some world       |
//! | `A &l B`   | `A` true at some world and `B` true at `w`       |
//! | `A & B`    | both true at `w`                                 |
//! | `A \| B`   | either true at `w`                               |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Connective, Formula, Language};
use crate::matrix::{TruthValue, Valuation};

/// Upper bound on `worlds * variables` for any model enumeration.
pub const ENUMERATION_GUARD_BITS: usize = 20;

/// Upper bound on worlds for Routley search (involution count grows fast).
pub const MAX_ROUTLEY_WORLDS: usize = 10;

const MAX_WORLDS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KripkeError {
    #[error("world w{0} does not exist")]
    UnknownWorld(usize),
    #[error("variable `{0}` is not declared in the model")]
    UnknownVariable(String),
    #[error("formula contains metavariable `{0}`")]
    Metavariable(String),
    #[error("connective `{connective}` is not in language {language}")]
    LanguageMismatch { connective: Connective, language: Language },
    #[error("connective `{0}` has no Routley truth condition")]
    NotRoutley(Connective),
    #[error("enumeration over {worlds} worlds x {vars} variables exceeds the guard ({limit})")]
    Capacity { worlds: usize, vars: usize, limit: usize },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("world bound must be at least 1")]
    ZeroBound,
    #[error("four-valued decoding needs exactly 2 worlds, model has {0}")]
    WrongWorldCount(usize),
}

fn all_worlds(k: usize) -> u64 {
    if k == 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// Shared world/valuation table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Table {
    vars: Vec<String>,
    /// `rows[w][v]`: truth of `vars[v]` at world `w`.
    rows: Vec<Vec<bool>>,
}

impl Table {
    fn new(vars: Vec<String>, rows: Vec<Vec<bool>>) -> Result<Self, KripkeError> {
        if rows.is_empty() || rows.len() > MAX_WORLDS {
            return Err(KripkeError::InvalidModel(format!(
                "world count must be in 1..={MAX_WORLDS}, got {}",
                rows.len()
            )));
        }
        if let Some(w) = rows.iter().position(|r| r.len() != vars.len()) {
            return Err(KripkeError::InvalidModel(format!(
                "world w{} assigns {} values for {} variables",
                w + 1,
                rows[w].len(),
                vars.len()
            )));
        }
        let mut sorted = vars.clone();
        sorted.sort();
        sorted.dedup();
        if sorted != vars {
            return Err(KripkeError::InvalidModel(
                "variables must be sorted and distinct".into(),
            ));
        }
        Ok(Table { vars, rows })
    }

    fn column(&self, var: &str) -> Result<u64, KripkeError> {
        let v = self
            .vars
            .binary_search_by(|x| x.as_str().cmp(var))
            .map_err(|_| KripkeError::UnknownVariable(var.to_string()))?;
        Ok(self
            .rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r[v])
            .fold(0, |m, (w, _)| m | 1 << w))
    }

    fn write_rows(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (w, row) in self.rows.iter().enumerate() {
            write!(f, "\nw{}:", w + 1)?;
            for (name, val) in self.vars.iter().zip(row) {
                write!(f, " {name}={}", u8::from(*val))?;
            }
        }
        Ok(())
    }
}

/// A discussive model: finitely many worlds, each with a classical valuation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KripkeModel {
    table: Table,
}

impl KripkeModel {
    /// `vars` sorted and distinct; `rows[w][v]` is the value of `vars[v]` at world `w`.
    pub fn new(vars: Vec<String>, rows: Vec<Vec<bool>>) -> Result<Self, KripkeError> {
        Ok(KripkeModel {
            table: Table::new(vars, rows)?,
        })
    }

    pub fn world_count(&self) -> usize {
        self.table.rows.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.table.vars
    }

    /// Value of `var` at world index `w` (0-based).
    pub fn value(&self, w: usize, var: &str) -> Option<bool> {
        let v = self.table.vars.iter().position(|x| x == var)?;
        self.table.rows.get(w).map(|r| r[v])
    }

    /// The two-world model encoding a four-valued valuation:
    /// `1 = (1,1)`, `i = (1,0)`, `j = (0,1)`, `0 = (0,0)`.
    pub fn from_four_valued(v: &Valuation) -> Result<Self, KripkeError> {
        let vars: Vec<String> = v.0.keys().cloned().collect();
        let mut rows = vec![Vec::new(), Vec::new()];
        for val in v.0.values() {
            let (a, b) = match val {
                TruthValue::One => (true, true),
                TruthValue::I => (true, false),
                TruthValue::J => (false, true),
                TruthValue::Zero => (false, false),
                other => {
                    return Err(KripkeError::InvalidModel(format!(
                        "`{other}` is not a four-valued discussive value"
                    )))
                }
            };
            rows[0].push(a);
            rows[1].push(b);
        }
        KripkeModel::new(vars, rows)
    }

    /// Bitmask of the worlds where `f` is true.
    pub fn truth_set(&self, f: &Formula) -> Result<u64, KripkeError> {
        let full = all_worlds(self.world_count());
        Ok(match f {
            Formula::Atom(n) => self.table.column(n)?,
            Formula::Meta(n) => return Err(KripkeError::Metavariable(n.clone())),
            Formula::Unary(c, a) => {
                let a = self.truth_set(a)?;
                match c {
                    Connective::Neg => full & !a,
                    Connective::DNeg => {
                        if a != full {
                            full
                        } else {
                            0
                        }
                    }
                    _ => unreachable!("unary connective"),
                }
            }
            Formula::Binary(c, l, r) => {
                let a = self.truth_set(l)?;
                let b = self.truth_set(r)?;
                match c {
                    Connective::Imp => {
                        if a == 0 {
                            full
                        } else {
                            b
                        }
                    }
                    Connective::ConjR => {
                        if b != 0 {
                            a
                        } else {
                            0
                        }
                    }
                    Connective::ConjL => {
                        if a != 0 {
                            b
                        } else {
                            0
                        }
                    }
                    Connective::Conj => a & b,
                    Connective::Disj => a | b,
                    _ => unreachable!("binary connective"),
                }
            }
        })
    }
}

/// `WORLDS k`, then one `wi: var=0/1 ...` line per world.
impl fmt::Display for KripkeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WORLDS {}", self.world_count())?;
        self.table.write_rows(f)
    }
}

/// Truth of `f` at world `w` (1-based, as in `w1`).
pub fn interpret(model: &KripkeModel, w: usize, f: &Formula) -> Result<bool, KripkeError> {
    if w == 0 || w > model.world_count() {
        return Err(KripkeError::UnknownWorld(w));
    }
    Ok(model.truth_set(f)? >> (w - 1) & 1 == 1)
}

/// Reads the truth pattern of `f` over a two-world model as `1/i/j/0`.
pub fn fourvalued_decode(model: &KripkeModel, f: &Formula) -> Result<TruthValue, KripkeError> {
    if model.world_count() != 2 {
        return Err(KripkeError::WrongWorldCount(model.world_count()));
    }
    Ok(match model.truth_set(f)? {
        0b11 => TruthValue::One,
        0b01 => TruthValue::I,
        0b10 => TruthValue::J,
        _ => TruthValue::Zero,
    })
}

/// Result of a bounded model search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum SearchVerdict<M> {
    /// No countermodel with at most `bound` worlds. `complete` is set when the
    /// bound is known to settle the question for the language searched.
    Holds {
        bound: usize,
        complete: bool,
    },
    Fails {
        countermodel: M,
    },
}

impl<M> SearchVerdict<M> {
    pub fn holds(&self) -> bool {
        matches!(self, SearchVerdict::Holds { .. })
    }

    pub fn countermodel(&self) -> Option<&M> {
        match self {
            SearchVerdict::Holds { .. } => None,
            SearchVerdict::Fails { countermodel } => Some(countermodel),
        }
    }

    /// `HOLDS`, `HOLDS-UP-TO-BOUND k` or `FAILS`.
    pub fn label(&self) -> String {
        match self {
            SearchVerdict::Holds { complete: true, .. } => "HOLDS".to_string(),
            SearchVerdict::Holds { bound, .. } => format!("HOLDS-UP-TO-BOUND {bound}"),
            SearchVerdict::Fails { .. } => "FAILS".to_string(),
        }
    }
}

impl<M: fmt::Display> fmt::Display for SearchVerdict<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())?;
        if let Some(m) = self.countermodel() {
            write!(f, "\n{m}")?;
        }
        Ok(())
    }
}

pub type KripkeVerdict = SearchVerdict<KripkeModel>;
pub type RoutleyVerdict = SearchVerdict<RoutleyModel>;

fn sorted_vars<'a>(formulas: impl Iterator<Item = &'a Formula>) -> Result<Vec<String>, KripkeError> {
    let mut vars = Vec::new();
    for f in formulas {
        if let Some(m) = f.metas().into_iter().next() {
            return Err(KripkeError::Metavariable(m.to_string()));
        }
        vars.extend(f.vars().into_iter().map(str::to_string));
    }
    vars.sort();
    vars.dedup();
    Ok(vars)
}

fn check_guard(worlds: usize, vars: usize) -> Result<(), KripkeError> {
    if worlds == 0 {
        return Err(KripkeError::ZeroBound);
    }
    if worlds.saturating_mul(vars) > ENUMERATION_GUARD_BITS {
        return Err(KripkeError::Capacity {
            worlds,
            vars,
            limit: ENUMERATION_GUARD_BITS,
        });
    }
    Ok(())
}

/// Every assignment for `k` worlds and `n` variables, as row tables.
///
/// Bits are laid out world-major (`w1` vars first, variables sorted) and the
/// sequence runs lexicographically with 1 before 0.
fn valuations(k: usize, n: usize) -> impl Iterator<Item = Vec<Vec<bool>>> {
    let bits = k * n;
    (0..1u64 << bits).rev().map(move |code| {
        (0..k)
            .map(|w| (0..n).map(|v| code >> (bits - 1 - (w * n + v)) & 1 == 1).collect())
            .collect()
    })
}

/// World bound used when the caller does not supply one: 2 for the
/// disjunction-free languages, otherwise `|subformulas| + 1`.
pub fn default_bound(lang: Language, premises: &[Formula], conclusion: &Formula) -> usize {
    if !lang.contains(Connective::Disj) {
        return 2;
    }
    let mut subs: Vec<&Formula> = premises
        .iter()
        .chain(std::iter::once(conclusion))
        .flat_map(Formula::subformulas)
        .collect();
    subs.sort();
    subs.dedup();
    subs.len() + 1
}

/// Whether two worlds decide discussive consequence for `lang`.
fn two_worlds_complete(lang: Language) -> bool {
    !lang.contains(Connective::Disj) && !lang.contains(Connective::Conj)
}

/// Discussive consequence: every premise true somewhere forces the
/// conclusion true somewhere. Searches every model with `1..=max_worlds`
/// worlds over the occurring variables.
pub fn entails_discussive(
    premises: &[Formula],
    conclusion: &Formula,
    lang: Language,
    max_worlds: usize,
) -> Result<KripkeVerdict, KripkeError> {
    for f in premises.iter().chain(std::iter::once(conclusion)) {
        lang.admits(f).map_err(|connective| KripkeError::LanguageMismatch {
            connective,
            language: lang,
        })?;
    }
    let vars = sorted_vars(premises.iter().chain(std::iter::once(conclusion)))?;
    check_guard(max_worlds, vars.len())?;
    for k in 1..=max_worlds {
        for rows in valuations(k, vars.len()) {
            let model = KripkeModel::new(vars.clone(), rows)?;
            let mut premises_hold = true;
            for p in premises {
                if model.truth_set(p)? == 0 {
                    premises_hold = false;
                    break;
                }
            }
            if premises_hold && model.truth_set(conclusion)? == 0 {
                return Ok(SearchVerdict::Fails { countermodel: model });
            }
        }
    }
    Ok(SearchVerdict::Holds {
        bound: max_worlds,
        complete: max_worlds >= 2 && two_worlds_complete(lang),
    })
}

/// Which worlds a Routley consequence relation preserves truth at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StarMode {
    /// Truth at every world.
    Forall,
    /// Truth at the base world.
    Base,
    /// Truth at some world.
    Exists,
}

impl StarMode {
    pub const ALL: [StarMode; 3] = [StarMode::Forall, StarMode::Base, StarMode::Exists];

    pub fn name(self) -> &'static str {
        match self {
            StarMode::Forall => "forall",
            StarMode::Base => "base",
            StarMode::Exists => "exists",
        }
    }
}

impl fmt::Display for StarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown star mode `{0}` (expected forall, base or exists)")]
pub struct UnknownStarMode(pub String);

impl FromStr for StarMode {
    type Err = UnknownStarMode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StarMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| UnknownStarMode(s.to_string()))
    }
}

/// A Routley interpretation: worlds, base world, involutive star, valuation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoutleyModel {
    table: Table,
    base: usize,
    star: Vec<usize>,
}

impl RoutleyModel {
    /// `base` and `star` entries are 0-based world indices.
    pub fn new(vars: Vec<String>, rows: Vec<Vec<bool>>, base: usize, star: Vec<usize>) -> Result<Self, KripkeError> {
        let table = Table::new(vars, rows)?;
        let k = table.rows.len();
        if base >= k {
            return Err(KripkeError::UnknownWorld(base + 1));
        }
        if star.len() != k || star.iter().any(|s| *s >= k) {
            return Err(KripkeError::InvalidModel("star must map every world to a world".into()));
        }
        if let Some(w) = (0..k).find(|w| star[star[*w]] != *w) {
            return Err(KripkeError::InvalidModel(format!(
                "star is not involutive at w{}",
                w + 1
            )));
        }
        Ok(RoutleyModel { table, base, star })
    }

    pub fn world_count(&self) -> usize {
        self.table.rows.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.table.vars
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn star(&self) -> &[usize] {
        &self.star
    }

    pub fn value(&self, w: usize, var: &str) -> Option<bool> {
        let v = self.table.vars.iter().position(|x| x == var)?;
        self.table.rows.get(w).map(|r| r[v])
    }

    pub fn is_involutive(&self) -> bool {
        (0..self.world_count()).all(|w| self.star[self.star[w]] == w)
    }

    pub fn truth_set(&self, f: &Formula) -> Result<u64, KripkeError> {
        Ok(match f {
            Formula::Atom(n) => self.table.column(n)?,
            Formula::Meta(n) => return Err(KripkeError::Metavariable(n.clone())),
            Formula::Unary(Connective::Neg, a) => {
                let a = self.truth_set(a)?;
                (0..self.world_count())
                    .filter(|w| a >> self.star[*w] & 1 == 0)
                    .fold(0, |m, w| m | 1 << w)
            }
            Formula::Binary(Connective::Conj, l, r) => self.truth_set(l)? & self.truth_set(r)?,
            Formula::Binary(Connective::Disj, l, r) => self.truth_set(l)? | self.truth_set(r)?,
            Formula::Unary(c, _) | Formula::Binary(c, _, _) => return Err(KripkeError::NotRoutley(*c)),
        })
    }

    /// Truth of `f` at world `w` (1-based).
    pub fn interpret(&self, w: usize, f: &Formula) -> Result<bool, KripkeError> {
        if w == 0 || w > self.world_count() {
            return Err(KripkeError::UnknownWorld(w));
        }
        Ok(self.truth_set(f)? >> (w - 1) & 1 == 1)
    }

    fn satisfies(&self, mode: StarMode, set: u64) -> bool {
        match mode {
            StarMode::Forall => set == all_worlds(self.world_count()),
            StarMode::Base => set >> self.base & 1 == 1,
            StarMode::Exists => set != 0,
        }
    }
}

/// `WORLDS k`, `STAR ...`, `BASE wi`, then the valuation rows.
impl fmt::Display for RoutleyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WORLDS {}\nSTAR", self.world_count())?;
        for s in &self.star {
            write!(f, " w{}", s + 1)?;
        }
        write!(f, "\nBASE w{}", self.base + 1)?;
        self.table.write_rows(f)
    }
}

/// All involutions on `k` points in lexicographic order of their word.
pub fn involutions(k: usize) -> Vec<Vec<usize>> {
    fn extend(word: &mut Vec<Option<usize>>, i: usize, out: &mut Vec<Vec<usize>>) {
        let k = word.len();
        if i == k {
            out.push(word.iter().map(|x| x.expect("complete")).collect());
            return;
        }
        if word[i].is_some() {
            extend(word, i + 1, out);
            return;
        }
        for j in i..k {
            if word[j].is_none() {
                word[i] = Some(j);
                word[j] = Some(i);
                extend(word, i + 1, out);
                word[j] = None;
                word[i] = None;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut vec![None; k], 0, &mut out);
    out
}

/// Single-premise consequence over Routley interpretations with at most
/// `max_worlds` worlds. Models are visited by world count, then star map,
/// then base world (only varied in [`StarMode::Base`]), then valuation.
pub fn routley_entails(
    premise: &Formula,
    conclusion: &Formula,
    mode: StarMode,
    max_worlds: usize,
) -> Result<RoutleyVerdict, KripkeError> {
    for f in [premise, conclusion] {
        Language::Fde
            .admits(f)
            .map_err(|connective| KripkeError::LanguageMismatch {
                connective,
                language: Language::Fde,
            })?;
    }
    let vars = sorted_vars([premise, conclusion].into_iter())?;
    check_guard(max_worlds, vars.len())?;
    if max_worlds > MAX_ROUTLEY_WORLDS {
        return Err(KripkeError::Capacity {
            worlds: max_worlds,
            vars: vars.len(),
            limit: ENUMERATION_GUARD_BITS,
        });
    }
    for k in 1..=max_worlds {
        let bases = if mode == StarMode::Base { k } else { 1 };
        for star in involutions(k) {
            for base in 0..bases {
                for rows in valuations(k, vars.len()) {
                    let model = RoutleyModel::new(vars.clone(), rows, base, star.clone())?;
                    debug_assert!(model.is_involutive());
                    if model.satisfies(mode, model.truth_set(premise)?)
                        && !model.satisfies(mode, model.truth_set(conclusion)?)
                    {
                        return Ok(SearchVerdict::Fails { countermodel: model });
                    }
                }
            }
        }
    }
    Ok(SearchVerdict::Holds {
        bound: max_worlds,
        complete: false,
    })
}
