use std::collections::BTreeSet;

use proptest::prelude::*;

use wtl::decision::{emptiness, Answer};
use wtl::engine::try_accepts;
use wtl::langlib::{fixtures, oracle, random_machine, RandomSpec};
use wtl::model::Mode;
use wtl::{enumerate, run_deterministic, Automaton, Limits, VerdictKind};

fn language(m: &Automaton, n: usize) -> BTreeSet<Vec<String>> {
    enumerate(m, n, None, Limits::default())
        .unwrap()
        .into_iter()
        .map(|w| m.decode_word(&w))
        .collect()
}

fn spec(mode: Mode) -> RandomSpec {
    RandomSpec {
        mode,
        ..RandomSpec::default()
    }
}

fn any_mode() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::Returning), Just(Mode::NonReturning)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trip(seed in any::<u64>(), mode in any_mode()) {
        let m = random_machine(seed, spec(mode));
        let text = m.to_text();
        let (back, _) = Automaton::from_text(&text).unwrap();
        prop_assert_eq!(back.to_text(), text);
        prop_assert_eq!(language(&back, 5), language(&m, 5));
    }

    #[test]
    fn state_renaming_keeps_language(seed in any::<u64>(), mode in any_mode()) {
        let m = random_machine(seed, spec(mode));
        let (r, _) = m.to_description().map_states(|s| format!("r_{s}")).validate().unwrap();
        prop_assert_eq!(language(&r, 5), language(&m, 5));
    }

    #[test]
    fn deterministic_runner_matches_search(seed in any::<u64>(), mode in any_mode(), word in prop::collection::vec(0usize..3, 0..7)) {
        let m = random_machine(seed, spec(mode));
        prop_assume!(m.is_deterministic());
        let letters: Vec<_> = m.letters().collect();
        let w: Vec<_> = word.iter().map(|&i| letters[i % letters.len()]).collect();
        let v = run_deterministic(&m, &w).unwrap();
        prop_assert_eq!(v.kind == VerdictKind::Accept, try_accepts(&m, &w, Limits::default()).unwrap());
    }

    #[test]
    fn emptiness_agrees_with_enumeration(seed in any::<u64>()) {
        let m = random_machine(seed, RandomSpec::default());
        let r = emptiness(&m).unwrap();
        let words = language(&m, 6);
        if r.answer == Answer::Yes {
            prop_assert!(words.is_empty());
        } else {
            let w = r.witness.unwrap();
            prop_assert!(try_accepts(&m, &m.encode_word(&w).unwrap(), Limits::default()).unwrap());
            if let Some(first) = words.iter().min_by_key(|w| w.len()) {
                prop_assert!(w.len() <= first.len());
            }
        }
    }
}

#[test]
fn catalog_files_exist_and_parse() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    for f in fixtures() {
        let text = std::fs::read_to_string(dir.join(f.file_name())).unwrap();
        assert_eq!(text, f.source, "{}", f.name);
        let (_, warnings) = Automaton::from_text(&text).unwrap();
        assert!(warnings.is_empty(), "{}: {warnings:?}", f.name);
    }
}

#[test]
fn designed_fixtures_match_oracles() {
    for name in ["exa22_l2", "m_L1", "m_L2", "m_union_L1L2", "m_abc_counts", "m_astar"] {
        let f = fixtures().iter().find(|f| f.name == name).unwrap();
        let id = f.oracle.unwrap();
        let m = f.automaton();
        let sigma = id.alphabet();
        let n = if sigma.len() > 3 { 5 } else { 7 };
        for idx in wtl::engine::ShortLex::new(sigma.len(), n) {
            let w: Vec<&str> = idx.iter().map(|&i| sigma[i]).collect();
            let got = try_accepts(&m, &m.encode_word(&w).unwrap(), Limits::default()).unwrap();
            assert_eq!(got, oracle(id, &w), "{name}: {}", w.join(" "));
        }
    }
}
