use std::collections::{BTreeMap, BTreeSet};

use super::{oracle, OracleId};
use crate::constructions::{npda_accepts, Npda};
use crate::engine::{try_accepts, LimitExceeded, Limits, ShortLex};
use crate::model::{Automaton, LetterId};

/// Letter counts over a full alphabet, zero entries included.
pub type ParikhVector = BTreeMap<String, usize>;

#[derive(Debug, Clone, Copy)]
pub enum ParikhSource<'a> {
    Automaton(&'a Automaton),
    Npda(&'a Npda),
    Oracle(OracleId),
}

pub fn parikh_of<S: AsRef<str>>(alphabet: &[S], word: &[S]) -> ParikhVector {
    let mut v: ParikhVector = alphabet.iter().map(|a| (a.as_ref().to_string(), 0)).collect();
    for t in word {
        *v.entry(t.as_ref().to_string()).or_insert(0) += 1;
    }
    v
}

/// The Parikh image of the source's language restricted to words of length
/// at most `n`, computed by exhaustive enumeration.
pub fn parikh_upto(
    source: ParikhSource<'_>,
    n: usize,
    limits: Limits,
) -> Result<BTreeSet<ParikhVector>, LimitExceeded> {
    let alphabet: Vec<String> = match source {
        ParikhSource::Automaton(m) => m.letters().map(|a| m.letter_name(a).to_string()).collect(),
        ParikhSource::Npda(m) => m.letters().map(|a| m.letter_name(a).to_string()).collect(),
        ParikhSource::Oracle(id) => id.alphabet().iter().map(|s| s.to_string()).collect(),
    };
    let mut out = BTreeSet::new();
    for idx in ShortLex::new(alphabet.len(), n) {
        let ids: Vec<LetterId> = idx.iter().map(|&i| LetterId(i as u16)).collect();
        let toks: Vec<String> = idx.iter().map(|&i| alphabet[i].clone()).collect();
        let member = match source {
            ParikhSource::Automaton(m) => try_accepts(m, &ids, limits)?,
            ParikhSource::Npda(m) => npda_accepts(m, &ids),
            ParikhSource::Oracle(id) => oracle(id, &toks),
        };
        if member {
            out.insert(parikh_of(&alphabet, &toks));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::langlib::fixture;

    #[test]
    fn replication_image_at_two() {
        let got = parikh_upto(ParikhSource::Oracle(OracleId::LRep), 2, Limits::default()).unwrap();
        let want = parikh_of(&["a", "b", "#"], &["a", "b"]);
        assert_eq!(got, BTreeSet::from([want]));
    }

    #[test]
    fn empty_machine_has_empty_image() {
        let m = fixture("m_empty").unwrap();
        assert!(parikh_upto(ParikhSource::Automaton(&m), 5, Limits::default())
            .unwrap()
            .is_empty());
    }
}
