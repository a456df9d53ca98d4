use super::*;
use crate::engine::accepts;
use crate::langlib::LBA_TOY;

fn toy() -> Lba {
    Lba::from_text(LBA_TOY).unwrap()
}

fn t(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

fn member(m: &crate::model::Automaton, w: &[String]) -> bool {
    accepts(m, &m.encode_word(w).unwrap())
}

#[test]
fn toy_runs() {
    let lba = toy();
    let LbaRun::Accepted(trace) = lba_run(&lba, &["a", "b"]).unwrap() else { panic!() };
    assert_eq!(trace.len(), 4);
    assert_eq!(lba.format_configuration(&trace[0]), "< q0 a b >");
    assert_eq!(lba.format_configuration(&trace[3]), "< a h b >");
    assert_eq!(lba_run(&lba, &["b", "a"]).unwrap(), LbaRun::Rejected);
    let LbaRun::Accepted(trace) = lba_run(&lba, &["a", "a", "b"]).unwrap() else { panic!() };
    assert_eq!(trace.len(), 6);
    assert!(lba_run(&lba, &["z"]).is_err());
}

#[test]
fn malformed_lba() {
    for src in [
        "lba.states: q\nlba.initial: q\nlba.tape: a\nlba.trans: q > -> q > R\n",
        "lba.states: q\nlba.initial: q\nlba.tape: a\nlba.trans: q a -> q > R\n",
        "lba.states: q\nlba.initial: p\n",
        "lba.states: c\nlba.initial: c\n",
        "lba.states: q\nlba.initial: q\nlba.tape: a\nlba.trans: q a -> q a R\nlba.trans: q a -> q a L\n",
    ] {
        assert!(Lba::from_text(src).is_err(), "{src}");
    }
    let lba = toy();
    assert_eq!(Lba::from_text(&lba.to_string()).unwrap(), lba);
}

#[test]
fn generated_word_shape() {
    let lba = toy();
    let w = valc_generate(&lba, &["a", "b"]).unwrap().unwrap();
    let expected = "< q0 a b > # < a b q2 > c >' b' h' a' <' #' >'' b'' q1'' a'' <''";
    assert_eq!(w, t(expected));
    assert!(in_valcp(&lba, &w));
    let five = valc_generate(&lba, &["a", "a", "b"]).unwrap().unwrap();
    let c = five.iter().position(|x| x == "c").unwrap();
    assert_eq!(five[..c].iter().filter(|x| *x == "#").count(), 2);
    assert!(valc_generate(&lba, &["b"]).unwrap().is_none());
    assert!(valc_generate(&lba, &[] as &[&str]).unwrap().is_none());
}

#[test]
fn membership() {
    let lba = toy();
    let w = valc_generate(&lba, &["a"]).unwrap().unwrap();
    assert!(in_valcp(&lba, &w));
    assert!(!in_valcp(&lba, &[] as &[&str]));
    let mut no_c = w.clone();
    no_c.retain(|x| x != "c");
    assert!(!in_valcp(&lba, &no_c));
    let i = w.iter().position(|x| x.ends_with("''")).unwrap();
    let mut flipped = w.clone();
    flipped[i].pop();
    assert!(!in_valcp(&lba, &flipped));
    // Any interleaving of the primed halves is a member.
    let c = w.iter().position(|x| x == "c").unwrap();
    let (mut p, mut d): (Vec<String>, Vec<String>) = w[c + 1..].iter().cloned().partition(|x| !x.ends_with("''"));
    let mut mixed = w[..=c].to_vec();
    while !p.is_empty() || !d.is_empty() {
        if !d.is_empty() {
            mixed.push(d.remove(0));
        }
        if !p.is_empty() {
            mixed.push(p.remove(0));
        }
    }
    assert!(in_valcp(&lba, &mixed));
}

#[test]
fn mutations_differ() {
    let lba = toy();
    let w = valc_generate(&lba, &["a", "b"]).unwrap().unwrap();
    for seed in 0..50 {
        let m = mutate_valid(&lba, &w, seed);
        assert_ne!(m, w);
    }
    assert_eq!(mutate_valid(&lba, &w, 7), mutate_valid(&lba, &w, 7));
}

#[test]
fn invalc_rejects_valid_words() {
    let lba = toy();
    let m = build_invalc(&lba, DEFAULT_INVALC_CAP).unwrap();
    for input in [&["a"][..], &["a", "b"], &["a", "a", "b"]] {
        let w = valc_generate(&lba, input).unwrap().unwrap();
        assert!(!member(&m, &w), "{input:?}");
    }
}

#[test]
fn invalc_accepts_mutants() {
    let lba = toy();
    let m = build_invalc(&lba, DEFAULT_INVALC_CAP).unwrap();
    let w = valc_generate(&lba, &["a", "b"]).unwrap().unwrap();
    for seed in 0..40 {
        let x = mutate_valid(&lba, &w, seed);
        assert_eq!(member(&m, &x), !in_valcp(&lba, &x), "{}", x.join(" "));
    }
}

#[test]
fn invalc_count_mismatch() {
    let lba = toy();
    let m = build_invalc(&lba, DEFAULT_INVALC_CAP).unwrap();
    let w = valc_generate(&lba, &["a", "b"]).unwrap().unwrap();
    let mut longer = w.clone();
    longer.push("a''".into());
    assert!(member(&m, &longer));
    let mut shorter = w.clone();
    let i = w.iter().position(|x| x == "b''").unwrap();
    shorter.remove(i);
    assert!(member(&m, &shorter));
}
