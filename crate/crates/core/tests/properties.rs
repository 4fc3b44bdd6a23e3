use discussive::kripke::{entails_discussive, fourvalued_decode, KripkeModel};
use discussive::{entails_matrix, eval, lookup_matrix, parse, Formula, Language, MatrixId, TruthValue, Valuation};
use proptest::prelude::*;

fn formula(lang: Language, atoms: &'static [&'static str]) -> impl Strategy<Value = Formula> {
    let leaf = prop::sample::select(atoms).prop_map(Formula::atom);
    leaf.prop_recursive(4, 24, 2, move |inner| {
        (prop::sample::select(lang.connectives()), inner.clone(), inner).prop_map(|(c, a, b)| {
            if c.arity() == 1 {
                Formula::unary(c, a)
            } else {
                Formula::binary(c, a, b)
            }
        })
    })
}

const PQR: &[&str] = &["p", "q", "r"];
/// Atom names that collide with connective suffixes.
const TRICKY: &[&str] = &["p", "q", "d", "dp", "l", "r", "rx"];

fn four_valued(atoms: &'static [&'static str]) -> impl Strategy<Value = Valuation> {
    let vals = vec![TruthValue::One, TruthValue::I, TruthValue::J, TruthValue::Zero];
    prop::collection::vec(prop::sample::select(vals), atoms.len())
        .prop_map(move |vs| atoms.iter().zip(vs).fold(Valuation::new(), |v, (a, x)| v.with(*a, x)))
}

fn holds(id: MatrixId, premises: &[Formula], c: &Formula) -> bool {
    entails_matrix(&lookup_matrix(id), premises, c).unwrap().holds()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_parse_roundtrip(
        (lang, f) in (0..Language::ALL.len()).prop_flat_map(|i| {
            let lang = Language::ALL[i];
            formula(lang, TRICKY).prop_map(move |f| (lang, f))
        }),
    ) {
        let text = f.to_string();
        prop_assert_eq!(parse(&text, lang).unwrap(), f, "printed as {}", text);
    }

    #[test]
    fn two_world_decoding_is_a_homomorphism(
        case in prop_oneof![
            formula(Language::RightMinus, PQR).prop_map(|f| (MatrixId::D2m4, f)),
            formula(Language::LeftMinus, PQR).prop_map(|f| (MatrixId::D2l4, f)),
            formula(Language::DiscussiveNeg, PQR).prop_map(|f| (MatrixId::Dn4, f)),
        ],
        v in four_valued(PQR),
    ) {
        let (id, f) = case;
        let model = KripkeModel::from_four_valued(&v).unwrap();
        prop_assert_eq!(fourvalued_decode(&model, &f).unwrap(), eval(&lookup_matrix(id), &v, &f).unwrap());
    }

    #[test]
    fn three_and_four_valued_agree(
        case in prop_oneof![
            (formula(Language::RightMinus, PQR), formula(Language::RightMinus, PQR))
                .prop_map(|(a, b)| (MatrixId::D2m3, MatrixId::D2m4, a, b)),
            (formula(Language::LeftMinus, PQR), formula(Language::LeftMinus, PQR))
                .prop_map(|(a, b)| (MatrixId::D2l3, MatrixId::D2l4, a, b)),
            (formula(Language::DiscussiveNeg, PQR), formula(Language::DiscussiveNeg, PQR))
                .prop_map(|(a, b)| (MatrixId::Dn3, MatrixId::Dn4, a, b)),
        ],
    ) {
        let (three, four, a, b) = case;
        let premises = [a];
        prop_assert_eq!(holds(three, &premises, &b), holds(four, &premises, &b));
        prop_assert_eq!(holds(three, &[], &b), holds(four, &[], &b));
    }

    #[test]
    fn three_valued_matches_two_world_search(
        a in formula(Language::RightMinus, PQR),
        b in formula(Language::RightMinus, PQR),
    ) {
        let premises = [a];
        let kripke = entails_discussive(&premises, &b, Language::RightMinus, 2).unwrap();
        prop_assert_eq!(holds(MatrixId::D2m3, &premises, &b), kripke.holds());
    }

    #[test]
    fn semantic_deduction_theorem(
        case in prop_oneof![
            (formula(Language::RightMinus, PQR), formula(Language::RightMinus, PQR), formula(Language::RightMinus, PQR))
                .prop_map(|(g, a, b)| (MatrixId::D2m3, g, a, b)),
            (formula(Language::LeftMinus, PQR), formula(Language::LeftMinus, PQR), formula(Language::LeftMinus, PQR))
                .prop_map(|(g, a, b)| (MatrixId::D2l3, g, a, b)),
            (formula(Language::NegCond, PQR), formula(Language::NegCond, PQR), formula(Language::NegCond, PQR))
                .prop_map(|(g, a, b)| (MatrixId::Nc3, g, a, b)),
            (formula(Language::DiscussiveNeg, PQR), formula(Language::DiscussiveNeg, PQR), formula(Language::DiscussiveNeg, PQR))
                .prop_map(|(g, a, b)| (MatrixId::Dn3, g, a, b)),
            (formula(Language::Right, PQR), formula(Language::Right, PQR), formula(Language::Right, PQR))
                .prop_map(|(g, a, b)| (MatrixId::D2p3, g, a, b)),
        ],
    ) {
        let (id, g, a, b) = case;
        let with_a = holds(id, &[g.clone(), a.clone()], &b);
        let discharged = holds(id, &[g], &Formula::imp(a, b));
        prop_assert_eq!(with_a, discharged);
    }

    #[test]
    fn evaluation_ignores_unused_variables(
        f in formula(Language::Right, &["p", "q"]),
        extra in prop::sample::select(&[TruthValue::One, TruthValue::I, TruthValue::Zero][..]),
        v in prop::collection::vec(prop::sample::select(&[TruthValue::One, TruthValue::I, TruthValue::Zero][..]), 2),
    ) {
        let m = lookup_matrix(MatrixId::D2p3);
        let base = Valuation::new().with("p", v[0]).with("q", v[1]);
        let wider = base.clone().with("z", extra);
        prop_assert_eq!(eval(&m, &base, &f).unwrap(), eval(&m, &wider, &f).unwrap());
    }
}

#[test]
fn implication_is_not_classical_in_three_values() {
    let p = Formula::atom("p");
    let q = Formula::atom("q");
    let np = Formula::neg(p.clone());
    assert!(!holds(MatrixId::D2m3, &[p.clone(), np], &q));
    assert!(holds(MatrixId::D2m3, &[p.clone(), Formula::imp(p, q.clone())], &q));
}
