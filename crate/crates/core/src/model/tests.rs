use super::*;

const SMALL: &str = "\
mode: returning
letters.push: b
letters.pop: a
letters.state: #
stack: B
states: q0 q1
initial: q0
translucent: q0 -> a
trans: q0 b _ -> q0 push B
trans: q0 b B -> q1 push B
trans: q0 b B -> q0 push B
trans: q1 a B -> q1 pop
trans: q1 end B -> accept
";

fn small() -> Automaton {
    Automaton::from_text(SMALL).unwrap().0
}

#[test]
fn parses_and_interns() {
    let (m, warnings) = Automaton::from_text(SMALL).unwrap();
    assert_eq!(m.mode(), Mode::Returning);
    assert_eq!(m.state_count(), 2);
    assert_eq!(m.state_name(m.initial()), "q0");
    let a = m.letter_id("a").unwrap();
    assert_eq!(m.letter_class(a), LetterClass::Pop);
    assert!(m.is_translucent(m.initial(), a));
    assert_eq!(warnings.len(), 1, "q1 has no translucency line");
    assert!(!m.is_deterministic());
}

#[test]
fn serialization_round_trips() {
    let m = small();
    let again = Automaton::from_text(&m.to_text()).unwrap();
    assert_eq!(again.0, m);
    assert!(again.1.is_empty());
}

#[test]
fn overlapping_signature_is_reported() {
    let mut d = small().to_description();
    d.push_letters.push("a".into());
    let errs = d.validate().unwrap_err();
    assert!(errs
        .kinds()
        .any(|k| matches!(k, ViolationKind::SignatureOverlap(t) if t == "a")));
    assert!(errs.to_string().contains("signature sets not disjoint"));
}

#[test]
fn wrong_table_is_reported() {
    let mut d = small().to_description();
    d.push("q0", "a", "_", "q0", "B");
    let errs = d.validate().unwrap_err();
    assert!(errs.kinds().any(|k| matches!(k, ViolationKind::WrongTable { .. })));
    assert!(errs.to_string().contains("wrong table for letter class"));
}

#[test]
fn endmarker_only_in_state_table() {
    let mut d = small().to_description();
    d.pop("q1", "end", "B", "q0");
    assert!(d.validate().is_err());
}

#[test]
fn reserved_and_unknown_tokens() {
    let mut d = small().to_description();
    d.stack.push("_".into());
    d.state_letters.push("end".into());
    d.stay("q9", "#", "Z", "q0");
    let errs = d.validate().unwrap_err();
    let kinds: Vec<_> = errs.kinds().cloned().collect();
    assert!(kinds.contains(&ViolationKind::ReservedToken("_".into())));
    assert!(kinds.contains(&ViolationKind::ReservedToken("end".into())));
    assert!(kinds.contains(&ViolationKind::UnknownState("q9".into())));
    assert!(kinds.contains(&ViolationKind::UnknownStackSymbol("Z".into())));
}

#[test]
fn accept_cannot_mix_with_targets() {
    let mut d = small().to_description();
    d.stay("q1", "end", "B", "q0");
    let errs = d.validate().unwrap_err();
    assert!(errs
        .kinds()
        .any(|k| matches!(k, ViolationKind::AcceptMixedWithTargets { .. })));
}

#[test]
fn syntax_errors_carry_line_numbers() {
    let errs = parse_description("mode: returning\ntrans: q0 a\nbogus line\n").unwrap_err();
    assert_eq!(errs.0.len(), 2);
    assert_eq!(errs.0[0].line, Some(2));
    assert_eq!(errs.0[1].line, Some(3));
}

#[test]
fn comments_allow_hash_letters() {
    let src = "mode: returning // a comment\nletters.state: # $\nstates: q\ninitial: q\ntranslucent: q -> # $\n";
    let (m, _) = Automaton::from_text(src).unwrap();
    assert_eq!(m.letter_count(), 2);
    assert_eq!(m.translucent_letters(m.initial()).count(), 2);
}

#[test]
fn token_rules() {
    assert!(is_valid_token("a1"));
    assert!(is_valid_token("•"));
    assert!(!is_valid_token(""));
    assert!(!is_valid_token("a//b"));
    assert!(!is_valid_token("push"));
}

#[test]
fn compatibility_is_reflexive() {
    let m = small();
    assert!(signatures_compatible(&m, &m));
}
