use std::collections::BTreeMap;

use discussive::harness::gen_derivation;
use discussive::hilbert::{
    check_derivation, deduction_transform, list_system, match_schema, DerivationVerdict, SystemId,
};
use discussive::{entails_matrix, lookup_matrix, tautology, Formula, Language, MatrixId};
use proptest::prelude::*;

fn sound_in(system: SystemId) -> &'static [MatrixId] {
    match system {
        SystemId::D2Minus => &[MatrixId::D2m3, MatrixId::D2m4],
        SystemId::D2Plus => &[MatrixId::D2p3],
        SystemId::D2Left => &[MatrixId::D2l3, MatrixId::D2l4],
        SystemId::D2Nc => &[MatrixId::Nc3],
        SystemId::D2Dn => &[MatrixId::Dn3, MatrixId::Dn4],
    }
}

/// The schema with each metavariable replaced by a distinct atom.
fn with_distinct_atoms(schema: &Formula) -> Formula {
    let map: BTreeMap<String, Formula> = schema
        .metas()
        .into_iter()
        .map(|m| (m.to_string(), Formula::atom(m.to_ascii_lowercase())))
        .collect();
    schema.substitute(&map).unwrap()
}

#[test]
fn every_schema_is_a_tautology_of_its_matrices() {
    let mut checked = 0;
    for system in SystemId::ALL {
        for s in list_system(system).schemata {
            let f = with_distinct_atoms(&s.formula);
            for &id in sound_in(system) {
                let verdict = tautology(&lookup_matrix(id), &f).unwrap();
                assert!(verdict.holds(), "{} {} in {id}: {verdict}", system.name(), s.name);
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 10 * 2 + 14 + 10 * 2 + 9 + 10 * 2);
}

#[test]
fn every_line_of_a_generated_derivation_is_entailed() {
    for system in SystemId::ALL {
        let m = lookup_matrix(sound_in(system)[0]);
        for index in 0..25 {
            let (d, _) = gen_derivation(system, 7, index);
            assert!(check_derivation(&d).unwrap().is_valid());
            for (k, line) in d.lines.iter().enumerate() {
                let verdict = entails_matrix(&m, &d.premises, &line.formula).unwrap();
                assert!(verdict.holds(), "{} #{index} line {}: {verdict}", system.name(), k + 1);
            }
        }
    }
}

#[test]
fn deduction_transform_corpus() {
    let mut transformed = 0;
    for system in SystemId::ALL {
        for index in 0..30 {
            let (d, dischargee) = gen_derivation(system, 2024, index);
            let conclusion = d.lines.last().unwrap().formula.clone();
            let out = deduction_transform(&d, &dischargee).unwrap();
            assert!(!out.premises.contains(&dischargee));
            assert_eq!(
                check_derivation(&out).unwrap(),
                DerivationVerdict::Valid {
                    conclusion: Formula::imp(dischargee.clone(), conclusion)
                },
                "{} #{index}",
                system.name()
            );
            transformed += 1;
        }
    }
    assert!(transformed >= 20);
}

fn formula(lang: Language) -> impl Strategy<Value = Formula> {
    let leaf = prop::sample::select(&["p", "q", "r"][..]).prop_map(Formula::atom);
    leaf.prop_recursive(3, 12, 2, move |inner| {
        (prop::sample::select(lang.connectives()), inner.clone(), inner).prop_map(|(c, a, b)| {
            if c.arity() == 1 {
                Formula::unary(c, a)
            } else {
                Formula::binary(c, a, b)
            }
        })
    })
}

fn system_and_substitution() -> impl Strategy<Value = (SystemId, usize, Vec<Formula>)> {
    prop::sample::select(&SystemId::ALL[..]).prop_flat_map(|system| {
        let count = list_system(system).schemata.len();
        (
            Just(system),
            0..count,
            prop::collection::vec(formula(system.language()), 3),
        )
    })
}

proptest! {
    #[test]
    fn match_recovers_an_equivalent_substitution((system, k, images) in system_and_substitution()) {
        let schema = list_system(system).schemata[k].formula.clone();
        let sigma: BTreeMap<String, Formula> = ["A", "B", "C"]
            .iter()
            .map(|m| m.to_string())
            .zip(images)
            .collect();
        let instance = schema.substitute(&sigma).unwrap();
        let found = match_schema(&schema, &instance);
        prop_assert!(found.is_some());
        prop_assert_eq!(schema.substitute(&found.unwrap()).unwrap(), instance);
    }

    #[test]
    fn every_match_is_an_instance(system in prop::sample::select(&SystemId::ALL[..]), f in formula(Language::L)) {
        for s in list_system(system).schemata {
            if let Some(sigma) = match_schema(&s.formula, &f) {
                prop_assert_eq!(s.formula.substitute(&sigma).unwrap(), f.clone());
            }
        }
    }
}
