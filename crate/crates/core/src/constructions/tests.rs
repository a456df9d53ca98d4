use super::*;
use crate::engine::{accepts, enumerate, Limits};
use crate::langlib::fixture;
use crate::model::LetterId;

fn word(m: &Automaton, s: &str) -> Vec<LetterId> {
    m.encode_word(&s.split_whitespace().collect::<Vec<_>>()).unwrap()
}

fn names(m: &Automaton, ws: Vec<Vec<LetterId>>) -> Vec<Vec<String>> {
    ws.into_iter().map(|w| m.decode_word(&w)).collect()
}

#[test]
fn nonreturning_doubles_states() {
    let m = fixture("exa21").unwrap();
    let n = to_nonreturning(&m).unwrap();
    assert_eq!(n.state_count(), 8);
    assert_eq!(n.mode(), Mode::NonReturning);
    let q0p = n.state_id("q0'").unwrap();
    assert_eq!(n.translucent_letters(q0p).count(), 3);
}

#[test]
fn nonreturning_keeps_language() {
    let m = fixture("exa21").unwrap();
    let n = to_nonreturning(&m).unwrap();
    let lm = names(&m, enumerate(&m, 6, None, Limits::default()).unwrap());
    let ln = names(&n, enumerate(&n, 6, None, Limits::default()).unwrap());
    assert_eq!(lm, ln);
    assert!(to_nonreturning(&n).is_err());
}

#[test]
fn primed_names_stay_unique() {
    let mut d = Description::new(Mode::Returning);
    d.states = vec!["q".into(), "q'".into()];
    d.initial = Some("q".into());
    d.stay("q", "end", "_", "q'");
    let m = d.validate().unwrap().0;
    let n = to_nonreturning(&m).unwrap();
    assert_eq!(n.state_count(), 4);
}

#[test]
fn union_preconditions() {
    let e21 = fixture("exa21").unwrap();
    let e22 = fixture("exa22").unwrap();
    assert_eq!(union_compatible(&e21, &e22), Err(ConstructionError::IncompatibleSignatures));
    let l1 = fixture("m_L1").unwrap();
    let l2 = fixture("m_L2").unwrap();
    assert_eq!(
        union_compatible(&l1, &l2),
        Err(ConstructionError::IncompatibleInitialTranslucency)
    );
}

#[test]
fn union_of_branches() {
    let a = fixture("exa22_l1").unwrap();
    let b = fixture("exa22_l2").unwrap();
    let u = union_compatible(&a, &b).unwrap();
    for w in ["a a1 a2", "a b b1 a1 a2", "b b2", "a b1"] {
        let expect = accepts(&a, &word(&a, w)) || accepts(&b, &word(&b, w));
        assert_eq!(accepts(&u, &word(&u, w)), expect, "{w}");
    }
}

#[test]
fn union_accept_dominates() {
    let mut d = Description::new(Mode::Returning);
    d.state_letters = vec!["x".into()];
    d.states = vec!["s".into(), "t".into()];
    d.initial = Some("s".into());
    d.accept("s", "x", "_");
    let a = d.validate().unwrap().0;
    let mut d = Description::new(Mode::Returning);
    d.state_letters = vec!["x".into()];
    d.states = vec!["s".into()];
    d.initial = Some("s".into());
    d.stay("s", "x", "_", "s");
    let b = d.validate().unwrap().0;
    let u = union_compatible(&a, &b).unwrap();
    assert!(accepts(&u, &word(&u, "x x")));
    assert!(!accepts(&u, &[]));
}

#[test]
fn npda_of_exa21() {
    let m = fixture("exa21").unwrap();
    let n = letter_equivalent_npda(&m, DEFAULT_STATE_CAP).unwrap();
    assert!(npda_accepts(&n, &word(&m, "b b a")));
    assert!(!npda_accepts(&n, &[]));
    for w in npda_enumerate(&n, 5) {
        assert!(accepts(&m, &w), "{:?}", m.decode_word(&w));
    }
}

#[test]
fn npda_immediate_accept() {
    let mut d = Description::new(Mode::Returning);
    d.states = vec!["q0".into()];
    d.initial = Some("q0".into());
    d.accept("q0", "end", "_");
    let m = d.validate().unwrap().0;
    let n = letter_equivalent_npda(&m, DEFAULT_STATE_CAP).unwrap();
    assert!(npda_accepts(&n, &[]));
}

#[test]
fn npda_respects_visibility() {
    // The only accepting entry is on a letter that is translucent, so the
    // machine accepts nothing.
    let mut d = Description::new(Mode::Returning);
    d.state_letters = vec!["a".into()];
    d.states = vec!["q0".into()];
    d.initial = Some("q0".into());
    d.translucent("q0", &["a"]);
    d.accept("q0", "a", "_");
    let m = d.validate().unwrap().0;
    let n = letter_equivalent_npda(&m, DEFAULT_STATE_CAP).unwrap();
    assert!(npda_enumerate(&n, 3).is_empty());
    assert!(enumerate(&m, 3, None, Limits::default()).unwrap().is_empty());
}

#[test]
fn npda_guard_and_mode() {
    let m = fixture("exa21").unwrap();
    assert!(matches!(
        letter_equivalent_npda(&m, 10),
        Err(NpdaError::TooLarge { states: 4, cap: 10 })
    ));
    let e22 = fixture("exa22").unwrap();
    assert_eq!(letter_equivalent_npda(&e22, DEFAULT_STATE_CAP), Err(NpdaError::NotReturning));
}

#[test]
fn npda_text_round_trip() {
    let m = fixture("m_union_L1L2").unwrap();
    let n = letter_equivalent_npda(&m, DEFAULT_STATE_CAP).unwrap();
    let back = Npda::from_text(&n.to_text()).unwrap();
    assert_eq!(back, n);
}
