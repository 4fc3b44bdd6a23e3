//! Seeded formula generation and the semantic cross-checks built on it.
//!
//! Randomness comes from SplitMix64 (state advanced by `0x9E3779B97F4A7C15`,
//! standard output mix). Formula `k` of a stream is drawn from a generator
//! whose state is the first output of `SplitMix64(seed ^ k·0x9E3779B97F4A7C15)`,
//! so any formula can be regenerated from `(seed, k)` alone. Choices use
//! `next_u64() % n`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;
use thiserror::Error;

use crate::formula::{parse, Formula, Language};
use crate::hilbert::{list_system, Derivation, Justification, Line, SystemId};
use crate::kripke::{entails_discussive, routley_entails, StarMode};
use crate::matrix::{entails_matrix, lookup_matrix, tautology, MatrixId, MatrixVerdict};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// Worlds searched on the Kripke and Routley side of every cross-check.
pub const CROSSCHECK_WORLDS: usize = 2;

const VARIABLE_NAMES: [&str; 8] = ["p", "q", "r", "s", "t", "u", "v", "w"];

/// Name of the `i`-th pool variable: `p, q, r, s, t, u, v, w, x8, x9, ...`.
pub fn variable_name(i: usize) -> String {
    VARIABLE_NAMES.get(i).map_or_else(|| format!("x{i}"), |s| s.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorConfig {
    pub language: Language,
    pub max_depth: usize,
    pub variable_count: usize,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn new(language: Language, seed: u64) -> Self {
        GeneratorConfig {
            language,
            max_depth: 4,
            variable_count: 3,
            seed,
        }
    }
}

fn stream(seed: u64, index: u64) -> SplitMix64 {
    let state = SplitMix64::seed_from_u64(seed ^ index.wrapping_mul(GOLDEN)).next_u64();
    SplitMix64::seed_from_u64(state)
}

fn pick(rng: &mut SplitMix64, n: usize) -> usize {
    (rng.next_u64() % n as u64) as usize
}

/// The `index`-th formula of the stream described by `cfg`.
///
/// At depth `d < max_depth` an atom has weight `d + 1` and every connective
/// of the language weight 1; at `max_depth` only atoms are drawn.
pub fn gen_formula(cfg: &GeneratorConfig, index: u64) -> Formula {
    fn node(cfg: &GeneratorConfig, rng: &mut SplitMix64, depth: usize) -> Formula {
        let vars = cfg.variable_count.max(1);
        let conns = cfg.language.connectives();
        if depth < cfg.max_depth {
            let atom_weight = depth + 1;
            let r = pick(rng, atom_weight + conns.len());
            if r >= atom_weight {
                let c = conns[r - atom_weight];
                return if c.arity() == 1 {
                    Formula::unary(c, node(cfg, rng, depth + 1))
                } else {
                    let l = node(cfg, rng, depth + 1);
                    Formula::binary(c, l, node(cfg, rng, depth + 1))
                };
            }
        }
        Formula::Atom(variable_name(pick(rng, vars)))
    }
    node(cfg, &mut stream(cfg.seed, index), 0)
}

/// The registered semantic comparisons.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pair {
    /// D2M-3 against D2M-4 over `Lr-`.
    ThreeVsFour,
    /// D2M-3 against two-world discussive models over `Lr-`.
    ThreeVsKripke,
    /// D2L-3 against discussive models over `Ll-`.
    LeftVsKripke,
    /// NC-3 against discussive models over `L-NC`.
    NcVsKripke,
    /// DN-3 against discussive models over `L-DN`.
    DnVsKripke,
    /// Routley consequence in the given mode against the matching
    /// Belnap-Dunn designation (forall/ETL, base/FDE, exists/NFL).
    StarVsBd(StarMode),
    /// `Γ, A ⊨ B` against `Γ ⊨ A -> B` in D2M-3.
    Deduction3v,
}

impl Pair {
    pub const ALL: [Pair; 9] = [
        Pair::ThreeVsFour,
        Pair::ThreeVsKripke,
        Pair::LeftVsKripke,
        Pair::NcVsKripke,
        Pair::DnVsKripke,
        Pair::StarVsBd(StarMode::Forall),
        Pair::StarVsBd(StarMode::Base),
        Pair::StarVsBd(StarMode::Exists),
        Pair::Deduction3v,
    ];

    pub fn name(self) -> String {
        match self {
            Pair::ThreeVsFour => "3v-vs-4v".into(),
            Pair::ThreeVsKripke => "3v-vs-kripke".into(),
            Pair::LeftVsKripke => "left-3v-vs-kripke".into(),
            Pair::NcVsKripke => "nc-3v-vs-kripke".into(),
            Pair::DnVsKripke => "dn-3v-vs-kripke".into(),
            Pair::StarVsBd(m) => format!("star-vs-bd:{m}"),
            Pair::Deduction3v => "deduction-3v".into(),
        }
    }

    pub fn language(self) -> Language {
        match self {
            Pair::ThreeVsFour | Pair::ThreeVsKripke | Pair::Deduction3v => Language::RightMinus,
            Pair::LeftVsKripke => Language::LeftMinus,
            Pair::NcVsKripke => Language::NegCond,
            Pair::DnVsKripke => Language::DiscussiveNeg,
            Pair::StarVsBd(_) => Language::Fde,
        }
    }

    fn three_valued(self) -> MatrixId {
        match self {
            Pair::LeftVsKripke => MatrixId::D2l3,
            Pair::NcVsKripke => MatrixId::Nc3,
            Pair::DnVsKripke => MatrixId::Dn3,
            Pair::StarVsBd(StarMode::Forall) => MatrixId::Bd4Etl,
            Pair::StarVsBd(StarMode::Base) => MatrixId::Bd4Fde,
            Pair::StarVsBd(StarMode::Exists) => MatrixId::Bd4Nfl,
            _ => MatrixId::D2m3,
        }
    }

    fn single_premise(self) -> bool {
        matches!(self, Pair::StarVsBd(_))
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error("unknown cross-check pair `{0}`")]
    UnknownPair(String),
    #[error("pair {pair} compares formulas of {expected}, generator produces {found}")]
    LanguageMismatch {
        pair: String,
        expected: Language,
        found: Language,
    },
}

impl FromStr for Pair {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Pair::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| HarnessError::UnknownPair(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub sample: usize,
    pub premises: Vec<String>,
    pub conclusion: String,
    pub left: String,
    pub right: String,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrosscheckReport {
    pub pair: String,
    pub language: Language,
    pub seed: u64,
    pub samples: usize,
    pub agreements: usize,
    /// Samples that hit a capacity guard; not counted in `samples`.
    pub skipped: usize,
    pub disagreements: Vec<Disagreement>,
}

impl CrosscheckReport {
    pub fn is_clean(&self) -> bool {
        self.disagreements.is_empty()
    }
}

impl fmt::Display for CrosscheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pair: {}", self.pair)?;
        writeln!(f, "language: {}", self.language)?;
        writeln!(f, "seed: {}", self.seed)?;
        writeln!(f, "samples: {}", self.samples)?;
        writeln!(f, "agreements: {}", self.agreements)?;
        writeln!(f, "skipped: {}", self.skipped)?;
        write!(f, "disagreements: {}", self.disagreements.len())?;
        for d in &self.disagreements {
            write!(
                f,
                "\n#{} [{}] => {}: left {} / right {} / witness {}",
                d.sample,
                d.premises.join(" ; "),
                d.conclusion,
                d.left,
                d.right,
                d.witness
            )?;
        }
        Ok(())
    }
}

/// One side of a comparison: verdict and a one-line witness.
struct Side {
    holds: bool,
    witness: Option<String>,
}

fn one_line(s: impl fmt::Display) -> String {
    s.to_string().replace('\n', "; ")
}

fn matrix_side(v: MatrixVerdict) -> Side {
    Side {
        holds: v.holds(),
        witness: v.countermodel().map(one_line),
    }
}

fn label(holds: bool) -> String {
    if holds { "holds" } else { "fails" }.to_string()
}

/// Runs both deciders of `pair` on `samples` generated problems.
///
/// Problem `s` draws its premise count (0-2, or exactly 1 for star pairs)
/// from the stream `(seed ^ SALT, s)`; its formulas are the next entries of
/// the formula stream, premises first. The deduction pair draws one extra
/// formula `B` and compares `Γ, A ⊨ B` with `Γ ⊨ A -> B`.
pub fn crosscheck(pair: Pair, cfg: &GeneratorConfig, samples: usize) -> Result<CrosscheckReport, HarnessError> {
    if cfg.language != pair.language() {
        return Err(HarnessError::LanguageMismatch {
            pair: pair.name(),
            expected: pair.language(),
            found: cfg.language,
        });
    }
    const SALT: u64 = 0x5EED_5EED_5EED_5EED;
    let matrix = lookup_matrix(pair.three_valued());
    let four = lookup_matrix(MatrixId::D2m4);
    let mut next = 0u64;
    let mut draw = || {
        let f = gen_formula(cfg, next);
        next += 1;
        f
    };
    let mut report = CrosscheckReport {
        pair: pair.name(),
        language: cfg.language,
        seed: cfg.seed,
        samples: 0,
        agreements: 0,
        skipped: 0,
        disagreements: Vec::new(),
    };

    for s in 0..samples {
        let count = if pair.single_premise() {
            1
        } else {
            pick(&mut stream(cfg.seed ^ SALT, s as u64), 3)
        };
        let mut premises: Vec<Formula> = (0..count).map(|_| draw()).collect();
        let mut conclusion = draw();
        let fits = "generated formulas fit the matrix";

        let (left, right) = match pair {
            Pair::Deduction3v => {
                // Γ, A ⊨ B against Γ ⊨ A -> B
                let b = draw();
                let imp = Formula::imp(conclusion.clone(), b.clone());
                let right = matrix_side(entails_matrix(&matrix, &premises, &imp).expect(fits));
                premises.push(std::mem::replace(&mut conclusion, b));
                let left = matrix_side(entails_matrix(&matrix, &premises, &conclusion).expect(fits));
                (left, Ok(right))
            }
            _ => {
                let left = matrix_side(entails_matrix(&matrix, &premises, &conclusion).expect(fits));
                let right = match pair {
                    Pair::ThreeVsFour => Ok(matrix_side(entails_matrix(&four, &premises, &conclusion).expect(fits))),
                    Pair::StarVsBd(mode) => {
                        routley_entails(&premises[0], &conclusion, mode, CROSSCHECK_WORLDS).map(|v| Side {
                            holds: v.holds(),
                            witness: v.countermodel().map(one_line),
                        })
                    }
                    _ => entails_discussive(&premises, &conclusion, cfg.language, CROSSCHECK_WORLDS).map(|v| Side {
                        holds: v.holds(),
                        witness: v.countermodel().map(one_line),
                    }),
                };
                (left, right)
            }
        };
        let Ok(right) = right else {
            report.skipped += 1;
            continue;
        };
        report.samples += 1;
        if left.holds == right.holds {
            report.agreements += 1;
        } else {
            report.disagreements.push(Disagreement {
                sample: s,
                premises: premises.iter().map(ToString::to_string).collect(),
                conclusion: conclusion.to_string(),
                left: label(left.holds),
                right: label(right.holds),
                witness: left.witness.or(right.witness).unwrap_or_default(),
            });
        }
    }
    Ok(report)
}

/// A valid derivation in `system`, built forward from random premises,
/// random axiom instances and modus ponens. Returns it with a premise to
/// discharge.
pub fn gen_derivation(system: SystemId, seed: u64, index: u64) -> (Derivation, Formula) {
    let sys = list_system(system);
    let cfg = GeneratorConfig {
        language: sys.language,
        max_depth: 2,
        variable_count: 3,
        seed: seed ^ index.wrapping_mul(GOLDEN),
    };
    let mut rng = stream(seed, index);
    let mut next = 0u64;
    let mut small = || {
        next += 1;
        gen_formula(&cfg, next)
    };
    let premise_count = 1 + pick(&mut rng, 3);
    let premises: Vec<Formula> = (0..premise_count).map(|_| small()).collect();
    let mut lines: Vec<Line> = Vec::new();
    let steps = 4 + pick(&mut rng, 8);

    for _ in 0..steps {
        match pick(&mut rng, 4) {
            0 => {
                let p = premises[pick(&mut rng, premises.len())].clone();
                lines.push(Line::new(p, Justification::Premise));
            }
            1 => {
                let schema = &sys.schemata[pick(&mut rng, sys.schemata.len())];
                let map: BTreeMap<String, Formula> = schema
                    .formula
                    .metas()
                    .into_iter()
                    .map(|m| {
                        let f = if !lines.is_empty() && pick(&mut rng, 2) == 0 {
                            lines[pick(&mut rng, lines.len())].formula.clone()
                        } else {
                            small()
                        };
                        (m.to_string(), f)
                    })
                    .collect();
                let f = schema.formula.substitute(&map).expect("all metavariables mapped");
                lines.push(Line::new(f, Justification::Axiom(Some(schema.name.clone()))));
            }
            _ => {
                let mut candidates = Vec::new();
                for (j, major) in lines.iter().enumerate() {
                    if let Some((a, _)) = major.formula.as_imp() {
                        if let Some(i) = lines.iter().position(|l| l.formula == *a) {
                            candidates.push((i, j));
                        }
                    }
                }
                if candidates.is_empty() {
                    // Seed an MP opportunity: B -> (C -> B) for some B already derived.
                    let b = match lines.first() {
                        Some(l) => l.formula.clone(),
                        None => {
                            let p = premises[0].clone();
                            lines.push(Line::new(p.clone(), Justification::Premise));
                            p
                        }
                    };
                    let c = small();
                    lines.push(Line::new(
                        Formula::imp(b.clone(), Formula::imp(c, b)),
                        Justification::Axiom(Some("Ax1".into())),
                    ));
                } else {
                    let (i, j) = candidates[pick(&mut rng, candidates.len())];
                    let (_, c) = lines[j].formula.as_imp().expect("implication");
                    let c = c.clone();
                    lines.push(Line::new(c, Justification::Mp(i + 1, j + 1)));
                }
            }
        }
    }
    let dischargee = premises[pick(&mut rng, premises.len())].clone();
    (
        Derivation {
            system,
            premises,
            lines,
        },
        dischargee,
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fact {
    pub name: String,
    pub formula: String,
    pub three_valued: String,
    pub discussive: String,
    pub witness: String,
    pub confirmed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NoncontainmentReport {
    pub facts: Vec<Fact>,
}

impl NoncontainmentReport {
    pub fn all_confirmed(&self) -> bool {
        self.facts.iter().all(|f| f.confirmed)
    }
}

impl fmt::Display for NoncontainmentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, fact) in self.facts.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            writeln!(f, "fact {}: {}", fact.name, fact.formula)?;
            writeln!(f, "  D2P-3: {}", fact.three_valued)?;
            writeln!(f, "  discussive: {}", fact.discussive)?;
            writeln!(f, "  witness: {}", fact.witness)?;
            write!(f, "  {}", if fact.confirmed { "CONFIRMED" } else { "NOT CONFIRMED" })?;
        }
        Ok(())
    }
}

/// Checks that the three-valued logic with disjunction and discussive
/// consequence over `Lr` each validate a formula the other rejects.
pub fn noncontainment_check() -> NoncontainmentReport {
    let lang = Language::Right;
    let d2p = lookup_matrix(MatrixId::D2p3);

    let a = parse("~(p | ~p) -> q", lang).expect("fixed formula");
    let a_matrix = tautology(&d2p, &a).expect("two variables");
    let a_bound = crate::kripke::default_bound(lang, &[], &a);
    let a_kripke = entails_discussive(&[], &a, lang, a_bound).expect("within guard");

    let b = parse("~(p | q) <-> ~p &r ~q", lang).expect("fixed formula");
    let b_matrix = tautology(&d2p, &b).expect("two variables");
    let b_kripke = entails_discussive(&[], &b, lang, CROSSCHECK_WORLDS).expect("within guard");

    NoncontainmentReport {
        facts: vec![
            Fact {
                name: "a".into(),
                formula: a.to_string(),
                three_valued: label(a_matrix.holds()),
                discussive: a_kripke.label(),
                witness: a_matrix.countermodel().map(one_line).unwrap_or_default(),
                confirmed: a_kripke.holds() && !a_matrix.holds(),
            },
            Fact {
                name: "b".into(),
                formula: b.to_string(),
                three_valued: label(b_matrix.holds()),
                discussive: b_kripke.label(),
                witness: b_kripke.countermodel().map(one_line).unwrap_or_default(),
                confirmed: b_matrix.holds() && !b_kripke.holds(),
            },
        ],
    }
}
