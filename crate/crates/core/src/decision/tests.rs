use std::collections::BTreeSet;

use super::*;
use crate::constructions::{npda_enumerate, union_compatible};
use crate::engine::{accepts, enumerate};
use crate::langlib::fixture;
use crate::model::Description;

fn g(src: &str) -> Cfg {
    Cfg::parse(src).unwrap()
}

/// Infinite iff some strongly connected set of useful nonterminals contains
/// an edge `A -> B` from a rule `A -> α B β` where `αβ` derives a nonempty word.
fn infinite_by_growth(cfg: &Cfg) -> bool {
    let t = cfg.trim();
    let n = t.nonterminals.len();
    let useful: Vec<bool> = {
        let mut u = vec![false; n];
        u[t.start] = true;
        for p in &t.productions {
            u[p.lhs] = true;
            for s in &p.rhs {
                if let Sym::N(m) = s {
                    u[*m] = true;
                }
            }
        }
        u
    };
    // A nonterminal derives a nonempty word iff it has a rule containing a
    // terminal or a nonterminal that does.
    let mut solid = vec![false; n];
    let mut changed = true;
    while changed {
        changed = false;
        for p in &t.productions {
            if !solid[p.lhs]
                && p.rhs.iter().any(|s| match s {
                    Sym::T(_) => true,
                    Sym::N(m) => solid[*m],
                })
            {
                solid[p.lhs] = true;
                changed = true;
            }
        }
    }
    let mut reach = vec![vec![false; n]; n];
    let mut edges = Vec::new();
    for p in &t.productions {
        for (i, s) in p.rhs.iter().enumerate() {
            if let Sym::N(b) = s {
                reach[p.lhs][*b] = true;
                let grows = p.rhs.iter().enumerate().any(|(j, o)| {
                    j != i
                        && match o {
                            Sym::T(_) => true,
                            Sym::N(m) => solid[*m],
                        }
                });
                edges.push((p.lhs, *b, grows));
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    edges
        .into_iter()
        .any(|(a, b, grows)| grows && useful[a] && (a == b || reach[b][a]))
}

fn names(cfg: &Cfg, n: usize) -> BTreeSet<Vec<String>> {
    cfg.words_upto(n).into_iter().map(|w| cfg.word_names(&w)).collect()
}

#[test]
fn small_grammars() {
    assert!(cfg_empty(&g("S -> a S")));
    assert!(!cfg_empty(&g("S -> a")));
    assert!(!cfg_finite(&g("S -> a S | a")));
    assert!(cfg_finite(&g("S -> a | b")));
    assert!(cfg_finite(&g("S -> A\nA -> B | a\nB -> A")));
    assert!(!cfg_finite(&g("S -> A B\nA -> a A | ε\nB -> b")));
    assert!(!cfg_finite(&g("S -> a S\nS -> b\nT -> T")));
    assert!(cfg_finite(&g("S -> b\nT -> a T | a")));
}

#[test]
fn cnf_preserves_words() {
    for src in [
        "S -> a S b | ε",
        "S -> A B | B\nA -> a A | ε\nB -> b | A",
        "S -> S S | ( S ) | ε",
        "S -> a b c d | A\nA -> S",
    ] {
        let c = g(src);
        let cnf = to_cnf(&c);
        assert_eq!(names(&c, 6), names(&cnf.grammar, 6), "{src}");
        for p in &cnf.grammar.productions {
            let ok = match p.rhs[..] {
                [] => p.lhs == cnf.grammar.start,
                [Sym::T(_)] => true,
                [Sym::N(_), Sym::N(_)] => true,
                _ => false,
            };
            assert!(ok, "{src}: {p:?}");
        }
    }
}

#[test]
fn cyk_matches_enumeration() {
    let c = g("S -> a S b | S S | ε");
    let words = c.words_upto(6);
    for idx in ShortLex::new(2, 6) {
        assert_eq!(c.cyk(&idx), words.contains(&idx), "{idx:?}");
    }
}

#[test]
fn shortest_word_is_shortlex_minimal() {
    let c = g("S -> b b | a S | c");
    let best = c.shortest_words()[c.start].clone().unwrap();
    assert_eq!(c.word_names(&best), vec!["c"]);
    let c = g("S -> b a | a b");
    let best = c.shortest_words()[c.start].clone().unwrap();
    assert_eq!(c.word_names(&best), vec!["a", "b"]);
}

#[test]
fn finiteness_agrees_with_growth_oracle() {
    for src in [
        "S -> a S | a",
        "S -> a | b",
        "S -> A\nA -> B | a\nB -> A",
        "S -> A B\nA -> a A | ε\nB -> b",
        "S -> A\nA -> A | B\nB -> b",
        "S -> A a\nA -> B\nB -> A | ε",
        "S -> A\nA -> a B\nB -> C\nC -> A | c",
        "S -> X\nX -> Y Y\nY -> ε | X",
    ] {
        let c = g(src);
        assert_eq!(!cfg_finite(&c), infinite_by_growth(&c), "{src}");
    }
}

#[test]
fn fixture_grammars_match_npda() {
    for name in ["exa21", "m_fin", "m_empty", "m_astar"] {
        let m = fixture(name).unwrap();
        let npda = letter_equivalent_npda(&m, DEFAULT_STATE_CAP).unwrap();
        let cfg = npda_to_cfg(&npda, DEFAULT_PRODUCTION_CAP).unwrap();
        let from_npda: BTreeSet<Vec<String>> = npda_enumerate(&npda, 5)
            .into_iter()
            .map(|w| npda.decode_word(&w))
            .collect();
        assert_eq!(names(&cfg, 5), from_npda, "{name}");
        assert_eq!(!cfg_finite(&cfg), infinite_by_growth(&cfg), "{name}");
    }
}

#[test]
fn exa21_grammar_generates_bba() {
    let m = fixture("exa21").unwrap();
    let cfg = grammar_of(&m).unwrap();
    let bba: Vec<String> = ["b", "b", "a"].map(String::from).to_vec();
    assert!(names(&cfg, 3).contains(&bba));
    let ids: Vec<usize> = bba.iter().map(|t| cfg.terminal_id(t).unwrap()).collect();
    assert!(cfg.cyk(&ids));
}

#[test]
fn epsilon_only_grammar() {
    let mut d = Description::new(Mode::Returning);
    d.state_letters = vec!["x".into()];
    d.states = vec!["q0".into()];
    d.initial = Some("q0".into());
    d.accept("q0", "end", "_");
    let m = d.validate().unwrap().0;
    let cfg = grammar_of(&m).unwrap();
    assert_eq!(names(&cfg, 4), BTreeSet::from([vec![]]));
    assert!(cfg_finite(&cfg));
}

#[test]
fn reports() {
    let e21 = fixture("exa21").unwrap();
    let r = emptiness(&e21).unwrap();
    assert_eq!(r.answer, Answer::No);
    let w = r.witness.clone().unwrap();
    assert!(accepts(&e21, &e21.encode_word(&w).unwrap()));
    assert_eq!(finiteness(&e21).unwrap().answer, Answer::No);

    let empty = fixture("m_empty").unwrap();
    assert_eq!(emptiness(&empty).unwrap().answer, Answer::Yes);
    assert_eq!(finiteness(&empty).unwrap().answer, Answer::Yes);
    assert!(enumerate(&empty, 7, None, Limits::default()).unwrap().is_empty());
    let both = union_compatible(&empty, &empty).unwrap();
    assert_eq!(emptiness(&both).unwrap().answer, Answer::Yes);

    let fin = fixture("m_fin").unwrap();
    assert_eq!(emptiness(&fin).unwrap().answer, Answer::No);
    assert_eq!(finiteness(&fin).unwrap().answer, Answer::Yes);

    let e22 = fixture("exa22").unwrap();
    assert_eq!(emptiness(&e22), Err(DecisionError::NotReturning));
}

#[test]
fn report_json_and_exit_codes() {
    let r = emptiness(&fixture("m_fin").unwrap()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(v["question"], "emptiness");
    assert_eq!(v["answer"], false);
    assert_eq!(v["witness"], serde_json::json!(["a"]));
    assert!(v["bound"].is_null());
    assert_eq!(r.exit_code(), 1);
    let u = bounded_equivalence(&fixture("exa21").unwrap(), &fixture("exa21").unwrap(), 4, Limits::default()).unwrap();
    assert_eq!(u.exit_code(), 3);
    let v: serde_json::Value = serde_json::from_str(&u.to_json()).unwrap();
    assert_eq!(v["answer"], "unknown");
    assert_eq!(v["bound"], 4);
}

#[test]
fn complement_of_counts() {
    let m = fixture("m_abc_counts").unwrap();
    let w = |s: &str| m.encode_word(&s.split_whitespace().collect::<Vec<_>>()).unwrap();
    assert!(complement_accepts(&m, &w("a b")).unwrap());
    assert!(!complement_accepts(&m, &w("a b c")).unwrap());
    assert!(!complement_accepts(&m, &w("")).unwrap());
    assert!(complement_accepts(&fixture("exa21").unwrap(), &[]).is_err());
}

#[test]
fn bounded_checks() {
    let astar = fixture("m_astar").unwrap();
    let r = bounded_universality(&astar, 4, Limits::default()).unwrap();
    assert_eq!(r.answer, Answer::No);
    assert_eq!(r.witness, Some(vec!["b".to_string(), "a".to_string()]));

    let e21 = fixture("exa21").unwrap();
    let r = bounded_equivalence(&e21, &e21, 6, Limits::default()).unwrap();
    assert_eq!(r.answer, Answer::Unknown(6));
    let nr = crate::constructions::to_nonreturning(&e21).unwrap();
    assert_eq!(
        bounded_equivalence(&e21, &nr, 6, Limits::default()),
        Err(DecisionError::ModeMismatch)
    );
    assert_eq!(
        bounded_equivalence_any_mode(&e21, &nr, 5, Limits::default()).unwrap().answer,
        Answer::Unknown(5)
    );

    let fin = fixture("m_fin").unwrap();
    let r = bounded_inclusion(&fin, &astar, 3, Limits::default()).unwrap();
    assert_eq!(r.answer, Answer::Unknown(3));
    let r = bounded_inclusion(&astar, &fin, 3, Limits::default()).unwrap();
    assert_eq!(r.witness, Some(vec![]));
}
