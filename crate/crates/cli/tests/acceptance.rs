//! Acceptance gate: one `[PASS]`/`[FAIL]` line per criterion, non-zero exit
//! if any criterion fails. Sizes and seeds are pinned below.

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::Instant;

use discussive::harness::{crosscheck, gen_derivation, gen_formula, noncontainment_check, GeneratorConfig, Pair};
use discussive::hilbert::{
    check_derivation, deduction_transform, list_system, Derivation, DerivationVerdict, SystemId,
};
use discussive::kripke::{entails_discussive, StarMode};
use discussive::{
    entails_matrix, lookup_matrix, parse, tautology, Connective, Formula, Language, MatrixId, TruthValue,
};

const SEED: u64 = 42;
const MAIN_SAMPLES: usize = 1000;
const VARIANT_SAMPLES: usize = 500;
const STAR_SAMPLES: usize = 500;
const DEDUCTION_SAMPLES: usize = 1000;
const DEDUCTION_CORPUS_PER_SYSTEM: u64 = 10;
const ROUNDTRIP_PER_LANGUAGE: u64 = 1000;
const KRIPKE_WORLDS: usize = 2;
const MAX_DEPTH: usize = 4;
const VARIABLES: usize = 3;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("AC1 table fidelity", ac1_tables),
        ("AC2 axiom soundness", ac2_soundness),
        ("AC3 MP preservation", ac3_modus_ponens),
        ("AC4 paraconsistency", ac4_paraconsistency),
        ("AC5 three-valued vs discussive", ac5_main_equivalence),
        ("AC6 non-containment", ac6_noncontainment),
        ("AC7 star vs Belnap-Dunn", ac7_star),
        ("AC8 deduction theorem", ac8_deduction),
        ("AC9 parser round-trip", ac9_roundtrip),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {name}: {detail} ({secs:.2}s)"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail} ({secs:.2}s)");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// Golden tables: unary images in value order, binary rows by left argument.
const NEG3: &str = "0 i 1";
const IMP3: &str = "1 i 0 / 1 i 0 / 1 1 1";
const CONJ_R3: &str = "1 1 0 / i i 0 / 0 0 0";
const NEG4: &str = "0 j i 1";
const IMP4: &str = "1 i j 0 / 1 i j 0 / 1 i j 0 / 1 1 1 1";
const CONJ_R4: &str = "1 1 1 0 / i i i 0 / j j j 0 / 0 0 0 0";
const BD_NEG: &str = "f b n t";
const BD_OR: &str = "t t t t / t b t b / t t n n / t b n f";
const BD_AND: &str = "t b n f / b b f f / n f n f / f f f f";

type GoldenEntry = (
    MatrixId,
    &'static str,
    &'static str,
    &'static [(Connective, &'static str)],
);

const GOLDEN: &[GoldenEntry] = {
    use Connective::*;
    &[
        (
            MatrixId::D2m3,
            "1 i 0",
            "1 i",
            &[(Neg, NEG3), (Imp, IMP3), (ConjR, CONJ_R3)],
        ),
        (
            MatrixId::D2m4,
            "1 i j 0",
            "1 i j",
            &[(Neg, NEG4), (Imp, IMP4), (ConjR, CONJ_R4)],
        ),
        (
            MatrixId::D2l3,
            "1 i 0",
            "1 i",
            &[(Neg, NEG3), (Imp, IMP3), (ConjL, "1 i 0 / 1 i 0 / 0 0 0")],
        ),
        (
            MatrixId::D2l4,
            "1 i j 0",
            "1 i j",
            &[
                (Neg, NEG4),
                (Imp, IMP4),
                (ConjL, "1 i j 0 / 1 i j 0 / 1 i j 0 / 0 0 0 0"),
            ],
        ),
        (MatrixId::Nc3, "1 i 0", "1 i", &[(Neg, NEG3), (Imp, IMP3)]),
        (
            MatrixId::Dn3,
            "1 i 0",
            "1 i",
            &[(DNeg, "0 1 1"), (Imp, IMP3), (ConjR, CONJ_R3)],
        ),
        (
            MatrixId::Dn4,
            "1 i j 0",
            "1 i j",
            &[(DNeg, "0 1 1 1"), (Imp, IMP4), (ConjR, CONJ_R4)],
        ),
        (
            MatrixId::D2p3,
            "1 i 0",
            "1 i",
            &[
                (Neg, NEG3),
                (Imp, IMP3),
                (ConjR, CONJ_R3),
                (Disj, "1 1 1 / 1 i i / 1 i 0"),
            ],
        ),
        (
            MatrixId::Bd4Fde,
            "t b n f",
            "t b",
            &[(Neg, BD_NEG), (Disj, BD_OR), (Conj, BD_AND)],
        ),
        (
            MatrixId::Bd4Nfl,
            "t b n f",
            "t b n",
            &[(Neg, BD_NEG), (Disj, BD_OR), (Conj, BD_AND)],
        ),
        (
            MatrixId::Bd4Etl,
            "t b n f",
            "t",
            &[(Neg, BD_NEG), (Disj, BD_OR), (Conj, BD_AND)],
        ),
    ]
};

fn values(s: &str) -> Vec<TruthValue> {
    s.split_whitespace().map(|v| v.parse().unwrap()).collect()
}

fn ac1_tables() -> Outcome {
    let mut cells = 0;
    let mut mismatches = Vec::new();
    for (id, vals, designated, tables) in GOLDEN {
        let m = lookup_matrix(*id);
        let vals = values(vals);
        if m.values() != vals.as_slice() || m.designated() != values(designated) {
            mismatches.push(format!("{id} values/designation"));
        }
        if tables.len() != m.language().connectives().len() {
            mismatches.push(format!("{id} connective count"));
        }
        for (c, text) in *tables {
            let rows: Vec<Vec<TruthValue>> = text.split('/').map(values).collect();
            for (x, a) in vals.iter().enumerate() {
                if c.arity() == 1 {
                    cells += 1;
                    if m.apply_unary(*c, *a) != Some(rows[0][x]) {
                        mismatches.push(format!("{id} {c}{a}"));
                    }
                    continue;
                }
                for (y, b) in vals.iter().enumerate() {
                    cells += 1;
                    if m.apply_binary(*c, *a, *b) != Some(rows[x][y]) {
                        mismatches.push(format!("{id} {a}{c}{b}"));
                    }
                }
            }
        }
    }
    check(
        mismatches.is_empty() && GOLDEN.len() == MatrixId::ALL.len(),
        format!(
            "{cells} cells in {} matrices, {} mismatches {:?}",
            GOLDEN.len(),
            mismatches.len(),
            mismatches
        ),
    )
}

fn ac2_soundness() -> Outcome {
    let pairs: [(SystemId, &[MatrixId]); 5] = [
        (SystemId::D2Minus, &[MatrixId::D2m3, MatrixId::D2m4]),
        (SystemId::D2Plus, &[MatrixId::D2p3]),
        (SystemId::D2Left, &[MatrixId::D2l3]),
        (SystemId::D2Nc, &[MatrixId::Nc3]),
        (SystemId::D2Dn, &[MatrixId::Dn3]),
    ];
    let mut checked = 0;
    let mut failures = Vec::new();
    for (system, matrices) in pairs {
        for s in list_system(system).schemata {
            let atoms: BTreeMap<String, Formula> = s
                .formula
                .metas()
                .into_iter()
                .map(|m| (m.to_string(), Formula::atom(m.to_ascii_lowercase())))
                .collect();
            let f = s.formula.substitute(&atoms).unwrap();
            for &id in matrices {
                checked += 1;
                match tautology(&lookup_matrix(id), &f) {
                    Ok(v) if v.holds() => {}
                    other => failures.push(format!("{} {} in {id}: {other:?}", system.name(), s.name)),
                }
            }
        }
    }
    check(
        failures.is_empty(),
        format!(
            "{checked} schema/matrix checks, {} failures {failures:?}",
            failures.len()
        ),
    )
}

fn ac3_modus_ponens() -> Outcome {
    let mut matrices = 0;
    let mut pairs = 0;
    let mut failures = Vec::new();
    for id in MatrixId::ALL {
        let m = lookup_matrix(id);
        if !m.language().contains(Connective::Imp) {
            continue;
        }
        matrices += 1;
        for &a in m.values() {
            for &b in m.values() {
                pairs += 1;
                let ab = m.apply_binary(Connective::Imp, a, b).unwrap();
                if m.is_designated(a) && m.is_designated(ab) && !m.is_designated(b) {
                    failures.push(format!("{id}: {a}, {a}->{b}={ab}"));
                }
            }
        }
    }
    check(
        failures.is_empty() && matrices == 8,
        format!(
            "{pairs} value pairs in {matrices} matrices, {} failures",
            failures.len()
        ),
    )
}

fn ac4_paraconsistency() -> Outcome {
    let lang = Language::RightMinus;
    let premises = [parse("p", lang).unwrap(), parse("~p", lang).unwrap()];
    let q = parse("q", lang).unwrap();
    let expected = [
        ("D2M-3", "FAILS\np=i\nq=0"),
        ("D2M-4", "FAILS\np=i\nq=0"),
        ("kripke:2", "FAILS\nWORLDS 2\nw1: p=1 q=0\nw2: p=0 q=0"),
    ];
    let got = [
        entails_matrix(&lookup_matrix(MatrixId::D2m3), &premises, &q)
            .unwrap()
            .to_string(),
        entails_matrix(&lookup_matrix(MatrixId::D2m4), &premises, &q)
            .unwrap()
            .to_string(),
        entails_discussive(&premises, &q, lang, KRIPKE_WORLDS)
            .unwrap()
            .to_string(),
    ];
    let mut ok = true;
    for ((name, want), got) in expected.iter().zip(&got) {
        println!("  {name}: {}", got.replace('\n', " | "));
        ok &= got == want;
    }
    check(ok, "{p, ~p} does not entail q; countermodels as documented".to_string())
}

fn run_pair(pair: Pair, samples: usize) -> Result<String, String> {
    let cfg = GeneratorConfig {
        language: pair.language(),
        max_depth: MAX_DEPTH,
        variable_count: VARIABLES,
        seed: SEED,
    };
    let report = crosscheck(pair, &cfg, samples).map_err(|e| e.to_string())?;
    let line = format!(
        "{} {}/{} agree, {} skipped",
        report.pair, report.agreements, report.samples, report.skipped
    );
    if report.is_clean() && report.samples == samples && report.skipped == 0 {
        Ok(line)
    } else {
        Err(format!("{line}\n{report}"))
    }
}

fn run_pairs(pairs: &[(Pair, usize)]) -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for &(pair, samples) in pairs {
        match run_pair(pair, samples) {
            Ok(l) => lines.push(l),
            Err(l) => {
                ok = false;
                lines.push(l);
            }
        }
    }
    check(ok, lines.join("; "))
}

fn ac5_main_equivalence() -> Outcome {
    run_pairs(&[
        (Pair::ThreeVsFour, MAIN_SAMPLES),
        (Pair::ThreeVsKripke, MAIN_SAMPLES),
        (Pair::LeftVsKripke, VARIANT_SAMPLES),
        (Pair::NcVsKripke, VARIANT_SAMPLES),
        (Pair::DnVsKripke, VARIANT_SAMPLES),
    ])
}

fn ac6_noncontainment() -> Outcome {
    let report = noncontainment_check();
    let witnesses: Vec<&str> = report.facts.iter().map(|f| f.witness.as_str()).collect();
    let expected = ["p=i; q=0", "WORLDS 2; w1: p=1 q=0; w2: p=0 q=1"];
    let status = Command::new(env!("CARGO_BIN_EXE_discussive"))
        .arg("noncontainment")
        .output()
        .map_err(|e| e.to_string())?
        .status
        .code();
    check(
        report.facts.len() == 2 && report.all_confirmed() && witnesses == expected && status == Some(0),
        format!("2 facts confirmed, witnesses {witnesses:?}, CLI exit {status:?}"),
    )
}

fn ac7_star() -> Outcome {
    let pairs: Vec<(Pair, usize)> = StarMode::ALL
        .into_iter()
        .map(|m| (Pair::StarVsBd(m), STAR_SAMPLES))
        .collect();
    run_pairs(&pairs)
}

/// A hand-written derivation of `q` from `p` and `p -> q`, discharging `p`.
const MODUS_PONENS: &str = "\
system: D2-MINUS
premises: p ; p -> q
1. p        [premise]
2. p -> q   [premise]
3. q        [mp 1 2]
";

fn ac8_deduction() -> Outcome {
    let semantic = run_pair(Pair::Deduction3v, DEDUCTION_SAMPLES);

    let mut corpus: Vec<(Derivation, Formula)> = Vec::new();
    let hand = Derivation::parse(MODUS_PONENS).map_err(|e| e.to_string())?;
    corpus.push((hand, Formula::atom("p")));
    for system in SystemId::ALL {
        for index in 0..DEDUCTION_CORPUS_PER_SYSTEM {
            corpus.push(gen_derivation(system, SEED, index));
        }
    }
    let mut failures = Vec::new();
    for (k, (d, a)) in corpus.iter().enumerate() {
        let Ok(DerivationVerdict::Valid { conclusion }) = check_derivation(d) else {
            failures.push(format!("#{k} input invalid"));
            continue;
        };
        let want = DerivationVerdict::Valid {
            conclusion: Formula::imp(a.clone(), conclusion),
        };
        match deduction_transform(d, a).map(|out| check_derivation(&out)) {
            Ok(Ok(v)) if v == want => {}
            other => failures.push(format!("#{k}: {other:?}")),
        }
    }
    let constructive = format!("{} derivations transformed, {} failures", corpus.len(), failures.len());
    match semantic {
        Ok(s) if failures.is_empty() && corpus.len() >= 20 => Ok(format!("{s}; {constructive}")),
        Ok(s) | Err(s) => Err(format!("{s}; {constructive} {failures:?}")),
    }
}

fn ac9_roundtrip() -> Outcome {
    let mut failures = Vec::new();
    for lang in Language::ALL {
        let cfg = GeneratorConfig {
            language: lang,
            max_depth: MAX_DEPTH,
            variable_count: VARIABLES,
            seed: SEED,
        };
        for index in 0..ROUNDTRIP_PER_LANGUAGE {
            let f = gen_formula(&cfg, index);
            let text = f.to_string();
            if parse(&text, lang).as_ref() != Ok(&f) {
                failures.push(format!("{lang} #{index}: {text}"));
            }
        }
    }
    check(
        failures.is_empty(),
        format!(
            "{} formulas per language x {} languages, {} failures {failures:?}",
            ROUNDTRIP_PER_LANGUAGE,
            Language::ALL.len(),
            failures.len()
        ),
    )
}
