//! Finite logical matrices and consequence by exhaustive enumeration.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Connective, Formula, Language};

/// Largest number of distinct variables [`entails_matrix`] will enumerate.
pub const MAX_MATRIX_VARS: usize = 16;

/// Truth values of both value families. Symbols are labels only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TruthValue {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "i")]
    I,
    #[serde(rename = "j")]
    J,
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "t")]
    T,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "n")]
    N,
    #[serde(rename = "f")]
    F,
}

impl TruthValue {
    pub fn symbol(self) -> &'static str {
        match self {
            TruthValue::One => "1",
            TruthValue::I => "i",
            TruthValue::J => "j",
            TruthValue::Zero => "0",
            TruthValue::T => "t",
            TruthValue::B => "b",
            TruthValue::N => "n",
            TruthValue::F => "f",
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for TruthValue {
    type Err = MatrixError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "1" => TruthValue::One,
            "i" => TruthValue::I,
            "j" => TruthValue::J,
            "0" => TruthValue::Zero,
            "t" => TruthValue::T,
            "b" => TruthValue::B,
            "n" => TruthValue::N,
            "f" => TruthValue::F,
            _ => return Err(MatrixError::UnknownValue(s.to_string())),
        })
    }
}

/// Registry keys for the built-in matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MatrixId {
    #[serde(rename = "D2M-3")]
    D2m3,
    #[serde(rename = "D2M-4")]
    D2m4,
    #[serde(rename = "D2L-3")]
    D2l3,
    #[serde(rename = "D2L-4")]
    D2l4,
    #[serde(rename = "NC-3")]
    Nc3,
    #[serde(rename = "DN-3")]
    Dn3,
    #[serde(rename = "DN-4")]
    Dn4,
    #[serde(rename = "D2P-3")]
    D2p3,
    #[serde(rename = "BD-4-FDE")]
    Bd4Fde,
    #[serde(rename = "BD-4-NFL")]
    Bd4Nfl,
    #[serde(rename = "BD-4-ETL")]
    Bd4Etl,
}

impl MatrixId {
    pub const ALL: [MatrixId; 11] = [
        MatrixId::D2m3,
        MatrixId::D2m4,
        MatrixId::D2l3,
        MatrixId::D2l4,
        MatrixId::Nc3,
        MatrixId::Dn3,
        MatrixId::Dn4,
        MatrixId::D2p3,
        MatrixId::Bd4Fde,
        MatrixId::Bd4Nfl,
        MatrixId::Bd4Etl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MatrixId::D2m3 => "D2M-3",
            MatrixId::D2m4 => "D2M-4",
            MatrixId::D2l3 => "D2L-3",
            MatrixId::D2l4 => "D2L-4",
            MatrixId::Nc3 => "NC-3",
            MatrixId::Dn3 => "DN-3",
            MatrixId::Dn4 => "DN-4",
            MatrixId::D2p3 => "D2P-3",
            MatrixId::Bd4Fde => "BD-4-FDE",
            MatrixId::Bd4Nfl => "BD-4-NFL",
            MatrixId::Bd4Etl => "BD-4-ETL",
        }
    }
}

impl fmt::Display for MatrixId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MatrixId {
    type Err = MatrixError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MatrixId::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| MatrixError::UnknownMatrix(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("unknown matrix `{0}`")]
    UnknownMatrix(String),
    #[error("unknown truth value `{0}`")]
    UnknownValue(String),
    #[error("value `{value}` is not a value of matrix {matrix}")]
    ForeignValue { value: TruthValue, matrix: String },
    #[error("variable `{0}` has no assigned value")]
    MissingVariable(String),
    #[error("formula uses `{connective}`, which is not in language {language}")]
    LanguageMismatch { connective: Connective, language: Language },
    #[error("formula contains metavariable `{0}`")]
    Metavariable(String),
    #[error("{vars} variables exceed the enumeration limit of {limit}")]
    Capacity { vars: usize, limit: usize },
    #[error("invalid matrix: {0}")]
    Invalid(String),
}

/// A truth table indexed by value positions in [`Matrix::values`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Table {
    Unary(Vec<usize>),
    Binary(Vec<Vec<usize>>),
}

/// A finite matrix: values, one table per connective, designated values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    name: String,
    language: Language,
    values: Vec<TruthValue>,
    designated: Vec<bool>,
    tables: BTreeMap<Connective, Table>,
}

impl Matrix {
    /// Builds a matrix from symbolic tables. Each unary table lists the image
    /// of every value in `values` order; binary tables are row-major with rows
    /// indexed by the left argument.
    pub fn new(
        name: impl Into<String>,
        language: Language,
        values: &[TruthValue],
        designated: &[TruthValue],
        tables: &[(Connective, Vec<TruthValue>)],
    ) -> Result<Matrix, MatrixError> {
        let name = name.into();
        let index = |v: TruthValue| {
            values.iter().position(|x| *x == v).ok_or(MatrixError::ForeignValue {
                value: v,
                matrix: name.clone(),
            })
        };
        let n = values.len();
        if n == 0 {
            return Err(MatrixError::Invalid("empty value set".into()));
        }
        let mut desig = vec![false; n];
        for d in designated {
            desig[index(*d)?] = true;
        }
        let count = desig.iter().filter(|d| **d).count();
        if count == 0 || count == n {
            return Err(MatrixError::Invalid(format!(
                "{name}: designated set must be a nonempty proper subset"
            )));
        }
        let mut built = BTreeMap::new();
        for (c, cells) in tables {
            if !language.contains(*c) {
                return Err(MatrixError::Invalid(format!(
                    "{name}: table for `{c}` outside language {language}"
                )));
            }
            let idx = cells.iter().map(|v| index(*v)).collect::<Result<Vec<_>, _>>()?;
            let table = match c.arity() {
                1 if idx.len() == n => Table::Unary(idx),
                2 if idx.len() == n * n => Table::Binary(idx.chunks(n).map(<[usize]>::to_vec).collect()),
                _ => {
                    return Err(MatrixError::Invalid(format!(
                        "{name}: table for `{c}` has {} cells",
                        idx.len()
                    )))
                }
            };
            if built.insert(*c, table).is_some() {
                return Err(MatrixError::Invalid(format!("{name}: duplicate table for `{c}`")));
            }
        }
        if let Some(c) = language.connectives().iter().find(|c| !built.contains_key(c)) {
            return Err(MatrixError::Invalid(format!("{name}: missing table for `{c}`")));
        }
        Ok(Matrix {
            name,
            language,
            values: values.to_vec(),
            designated: desig,
            tables: built,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn language(&self) -> Language {
        self.language
    }

    /// Values in enumeration order.
    pub fn values(&self) -> &[TruthValue] {
        &self.values
    }

    pub fn designated(&self) -> Vec<TruthValue> {
        self.values
            .iter()
            .zip(&self.designated)
            .filter(|(_, d)| **d)
            .map(|(v, _)| *v)
            .collect()
    }

    pub fn is_designated(&self, v: TruthValue) -> bool {
        self.position(v).is_some_and(|i| self.designated[i])
    }

    pub fn table(&self, c: Connective) -> Option<&Table> {
        self.tables.get(&c)
    }

    fn position(&self, v: TruthValue) -> Option<usize> {
        self.values.iter().position(|x| *x == v)
    }

    pub fn apply_unary(&self, c: Connective, a: TruthValue) -> Option<TruthValue> {
        match self.tables.get(&c)? {
            Table::Unary(t) => Some(self.values[t[self.position(a)?]]),
            Table::Binary(_) => None,
        }
    }

    pub fn apply_binary(&self, c: Connective, a: TruthValue, b: TruthValue) -> Option<TruthValue> {
        match self.tables.get(&c)? {
            Table::Binary(t) => Some(self.values[t[self.position(a)?][self.position(b)?]]),
            Table::Unary(_) => None,
        }
    }

    fn check_language(&self, f: &Formula) -> Result<(), MatrixError> {
        if let Some(m) = f.metas().into_iter().next() {
            return Err(MatrixError::Metavariable(m.to_string()));
        }
        self.language
            .admits(f)
            .map_err(|connective| MatrixError::LanguageMismatch {
                connective,
                language: self.language,
            })
    }

    /// Value index of `f` under `lookup`, which maps atoms to value indices.
    fn eval_index(&self, f: &Formula, lookup: &dyn Fn(&str) -> Option<usize>) -> Result<usize, MatrixError> {
        match f {
            Formula::Atom(n) => lookup(n).ok_or_else(|| MatrixError::MissingVariable(n.clone())),
            Formula::Meta(n) => Err(MatrixError::Metavariable(n.clone())),
            Formula::Unary(c, a) => {
                let a = self.eval_index(a, lookup)?;
                match &self.tables[c] {
                    Table::Unary(t) => Ok(t[a]),
                    Table::Binary(_) => unreachable!("arity checked at construction"),
                }
            }
            Formula::Binary(c, l, r) => {
                let l = self.eval_index(l, lookup)?;
                let r = self.eval_index(r, lookup)?;
                match &self.tables[c] {
                    Table::Binary(t) => Ok(t[l][r]),
                    Table::Unary(_) => unreachable!("arity checked at construction"),
                }
            }
        }
    }
}

/// An assignment of truth values to a finite list of variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Valuation(pub BTreeMap<String, TruthValue>);

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: impl Into<String>, v: TruthValue) -> Self {
        self.0.insert(var.into(), v);
        self
    }

    pub fn get(&self, var: &str) -> Option<TruthValue> {
        self.0.get(var).copied()
    }

    /// Parses `p=i,q=1`.
    pub fn parse_assignments(s: &str) -> Result<Valuation, MatrixError> {
        let mut out = Valuation::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (var, val) = part
                .split_once('=')
                .ok_or_else(|| MatrixError::UnknownValue(part.to_string()))?;
            out.0.insert(var.trim().to_string(), val.trim().parse()?);
        }
        Ok(out)
    }
}

/// `var=value` lines, variables sorted.
impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

/// Outcome of a matrix consequence check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "countermodel", rename_all = "lowercase")]
pub enum MatrixVerdict {
    Holds,
    Fails(Valuation),
}

impl MatrixVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, MatrixVerdict::Holds)
    }

    pub fn countermodel(&self) -> Option<&Valuation> {
        match self {
            MatrixVerdict::Holds => None,
            MatrixVerdict::Fails(v) => Some(v),
        }
    }
}

/// Verdict line first (`HOLDS` / `FAILS`), then the countermodel, if any.
impl fmt::Display for MatrixVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixVerdict::Holds => f.write_str("HOLDS"),
            MatrixVerdict::Fails(v) if v.0.is_empty() => f.write_str("FAILS"),
            MatrixVerdict::Fails(v) => write!(f, "FAILS\n{v}"),
        }
    }
}

/// Homomorphic extension of `v` to `f`.
pub fn eval(m: &Matrix, v: &Valuation, f: &Formula) -> Result<TruthValue, MatrixError> {
    m.check_language(f)?;
    for val in v.0.values() {
        if m.position(*val).is_none() {
            return Err(MatrixError::ForeignValue {
                value: *val,
                matrix: m.name.clone(),
            });
        }
    }
    let idx = m.eval_index(f, &|n| v.get(n).and_then(|x| m.position(x)))?;
    Ok(m.values[idx])
}

/// Decides `premises ⊨ conclusion` by enumerating every valuation of the
/// occurring variables. Variables are sorted and values run in matrix order,
/// first variable slowest, so the returned countermodel is the first failure
/// in that order.
pub fn entails_matrix(m: &Matrix, premises: &[Formula], conclusion: &Formula) -> Result<MatrixVerdict, MatrixError> {
    for f in premises.iter().chain(std::iter::once(conclusion)) {
        m.check_language(f)?;
    }
    let mut vars: Vec<&str> = premises
        .iter()
        .chain(std::iter::once(conclusion))
        .flat_map(Formula::vars)
        .collect();
    vars.sort_unstable();
    vars.dedup();
    if vars.len() > MAX_MATRIX_VARS {
        return Err(MatrixError::Capacity {
            vars: vars.len(),
            limit: MAX_MATRIX_VARS,
        });
    }

    let base = m.values.len();
    let mut digits = vec![0usize; vars.len()];
    loop {
        let lookup = |n: &str| vars.binary_search(&n).ok().map(|i| digits[i]);
        let mut premises_ok = true;
        for p in premises {
            if !m.designated[m.eval_index(p, &lookup)?] {
                premises_ok = false;
                break;
            }
        }
        if premises_ok && !m.designated[m.eval_index(conclusion, &lookup)?] {
            let cm = vars
                .iter()
                .zip(&digits)
                .map(|(n, d)| (n.to_string(), m.values[*d]))
                .collect();
            return Ok(MatrixVerdict::Fails(Valuation(cm)));
        }
        // Odometer increment, last variable fastest.
        let mut k = digits.len();
        loop {
            if k == 0 {
                return Ok(MatrixVerdict::Holds);
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < base {
                break;
            }
            digits[k] = 0;
        }
    }
}

/// Validity: [`entails_matrix`] with no premises.
pub fn tautology(m: &Matrix, f: &Formula) -> Result<MatrixVerdict, MatrixError> {
    entails_matrix(m, &[], f)
}

/// Returns the registry matrix for `id`.
pub fn lookup_matrix(id: MatrixId) -> Matrix {
    registry::build(id)
}

mod registry {
    use super::*;
    use Connective::*;
    use TruthValue::{One, Zero, B, F, I, J, N, T};

    const THREE: [TruthValue; 3] = [One, I, Zero];
    const FOUR: [TruthValue; 4] = [One, I, J, Zero];
    const BELNAP: [TruthValue; 4] = [T, B, N, F];

    fn neg3() -> (Connective, Vec<TruthValue>) {
        (Neg, vec![Zero, I, One])
    }

    fn neg4() -> (Connective, Vec<TruthValue>) {
        (Neg, vec![Zero, J, I, One])
    }

    fn dneg3() -> (Connective, Vec<TruthValue>) {
        (DNeg, vec![Zero, One, One])
    }

    fn dneg4() -> (Connective, Vec<TruthValue>) {
        (DNeg, vec![Zero, One, One, One])
    }

    #[rustfmt::skip]
    fn imp3() -> (Connective, Vec<TruthValue>) {
        (Imp, vec![
            One, I, Zero,
            One, I, Zero,
            One, One, One,
        ])
    }

    #[rustfmt::skip]
    fn imp4() -> (Connective, Vec<TruthValue>) {
        (Imp, vec![
            One, I, J, Zero,
            One, I, J, Zero,
            One, I, J, Zero,
            One, One, One, One,
        ])
    }

    #[rustfmt::skip]
    fn conj_r3() -> (Connective, Vec<TruthValue>) {
        (ConjR, vec![
            One, One, Zero,
            I, I, Zero,
            Zero, Zero, Zero,
        ])
    }

    #[rustfmt::skip]
    fn conj_r4() -> (Connective, Vec<TruthValue>) {
        (ConjR, vec![
            One, One, One, Zero,
            I, I, I, Zero,
            J, J, J, Zero,
            Zero, Zero, Zero, Zero,
        ])
    }

    #[rustfmt::skip]
    fn conj_l3() -> (Connective, Vec<TruthValue>) {
        (ConjL, vec![
            One, I, Zero,
            One, I, Zero,
            Zero, Zero, Zero,
        ])
    }

    #[rustfmt::skip]
    fn conj_l4() -> (Connective, Vec<TruthValue>) {
        (ConjL, vec![
            One, I, J, Zero,
            One, I, J, Zero,
            One, I, J, Zero,
            Zero, Zero, Zero, Zero,
        ])
    }

    #[rustfmt::skip]
    fn disj3() -> (Connective, Vec<TruthValue>) {
        (Disj, vec![
            One, One, One,
            One, I, I,
            One, I, Zero,
        ])
    }

    fn belnap(designated: &[TruthValue], name: &str) -> Matrix {
        #[rustfmt::skip]
        let tables = [
            (Neg, vec![F, B, N, T]),
            (Disj, vec![
                T, T, T, T,
                T, B, T, B,
                T, T, N, N,
                T, B, N, F,
            ]),
            (Conj, vec![
                T, B, N, F,
                B, B, F, F,
                N, F, N, F,
                F, F, F, F,
            ]),
        ];
        Matrix::new(name, Language::Fde, &BELNAP, designated, &tables).expect("registry matrix")
    }

    pub(super) fn build(id: MatrixId) -> Matrix {
        let name = id.name();
        let m = match id {
            MatrixId::D2m3 => Matrix::new(
                name,
                Language::RightMinus,
                &THREE,
                &[One, I],
                &[neg3(), imp3(), conj_r3()],
            ),
            MatrixId::D2m4 => Matrix::new(
                name,
                Language::RightMinus,
                &FOUR,
                &[One, I, J],
                &[neg4(), imp4(), conj_r4()],
            ),
            MatrixId::D2l3 => Matrix::new(
                name,
                Language::LeftMinus,
                &THREE,
                &[One, I],
                &[neg3(), imp3(), conj_l3()],
            ),
            MatrixId::D2l4 => Matrix::new(
                name,
                Language::LeftMinus,
                &FOUR,
                &[One, I, J],
                &[neg4(), imp4(), conj_l4()],
            ),
            MatrixId::Nc3 => Matrix::new(name, Language::NegCond, &THREE, &[One, I], &[neg3(), imp3()]),
            MatrixId::Dn3 => Matrix::new(
                name,
                Language::DiscussiveNeg,
                &THREE,
                &[One, I],
                &[dneg3(), imp3(), conj_r3()],
            ),
            MatrixId::Dn4 => Matrix::new(
                name,
                Language::DiscussiveNeg,
                &FOUR,
                &[One, I, J],
                &[dneg4(), imp4(), conj_r4()],
            ),
            MatrixId::D2p3 => Matrix::new(
                name,
                Language::Right,
                &THREE,
                &[One, I],
                &[neg3(), imp3(), conj_r3(), disj3()],
            ),
            MatrixId::Bd4Fde => return belnap(&[T, B], name),
            MatrixId::Bd4Nfl => return belnap(&[T, B, N], name),
            MatrixId::Bd4Etl => return belnap(&[T], name),
        };
        m.expect("registry matrix")
    }
}
