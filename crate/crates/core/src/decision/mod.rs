//! Emptiness and finiteness for returning machines through the
//! letter-equivalent NPDA and a grammar back end, the deterministic
//! complement recognizer, and bounded universality/inclusion/equivalence.

mod cfg;

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::constructions::{letter_equivalent_npda, NpdaError, DEFAULT_STATE_CAP};
use crate::engine::{run_deterministic, try_accepts, LimitExceeded, Limits, NotDeterministic, ShortLex, VerdictKind};
use crate::model::{Automaton, LetterId, Mode};

pub use cfg::{
    cfg_cycle, cfg_empty, cfg_finite, npda_to_cfg, to_cnf, Cfg, CfgError, Cnf, Production, Sym,
    DEFAULT_PRODUCTION_CAP,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Question {
    Emptiness,
    Finiteness,
    UniversalityBounded,
    InclusionBounded,
    EquivalenceBounded,
}

impl Question {
    pub fn as_str(self) -> &'static str {
        match self {
            Question::Emptiness => "emptiness",
            Question::Finiteness => "finiteness",
            Question::UniversalityBounded => "universality_bounded",
            Question::InclusionBounded => "inclusion_bounded",
            Question::EquivalenceBounded => "equivalence_bounded",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    Unknown(usize),
}

impl Serialize for Answer {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Answer::Yes => s.serialize_bool(true),
            Answer::No => s.serialize_bool(false),
            Answer::Unknown(_) => s.serialize_str("unknown"),
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Yes => f.write_str("true"),
            Answer::No => f.write_str("false"),
            Answer::Unknown(b) => write!(f, "unknown (no counterexample up to length {b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecisionReport {
    pub question: Question,
    pub answer: Answer,
    pub witness: Option<Vec<String>>,
    pub bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl DecisionReport {
    fn new(question: Question, answer: Answer) -> Self {
        DecisionReport {
            question,
            answer,
            witness: None,
            bound: None,
            detail: None,
        }
    }

    /// 0 for true, 1 for false, 3 for unknown.
    pub fn exit_code(&self) -> i32 {
        match self.answer {
            Answer::Yes => 0,
            Answer::No => 1,
            Answer::Unknown(_) => 3,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for DecisionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.question.as_str(), self.answer)?;
        if let Some(w) = &self.witness {
            let w = if w.is_empty() { "ε".to_string() } else { w.join(" ") };
            writeln!(f, "witness: {w}")?;
        }
        if let Some(b) = self.bound {
            writeln!(f, "bound: {b}")?;
        }
        if let Some(d) = &self.detail {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecisionError {
    #[error("emptiness and finiteness are decided for returning machines only")]
    NotReturning,
    #[error(transparent)]
    NotDeterministic(#[from] NotDeterministic),
    #[error(transparent)]
    Npda(#[from] NpdaError),
    #[error(transparent)]
    Cfg(#[from] CfgError),
    #[error(transparent)]
    Limit(#[from] LimitExceeded),
    #[error("machines run in different modes")]
    ModeMismatch,
    #[error("witness `{0}` is not accepted by the machine")]
    UnverifiedWitness(String),
}

/// The grammar of the letter-equivalent NPDA of a returning machine.
pub fn grammar_of(aut: &Automaton) -> Result<Cfg, DecisionError> {
    if aut.mode() != Mode::Returning {
        return Err(DecisionError::NotReturning);
    }
    let npda = letter_equivalent_npda(aut, DEFAULT_STATE_CAP)?;
    let cfg = npda_to_cfg(&npda, DEFAULT_PRODUCTION_CAP)?;
    log::debug!(
        "grammar: {} nonterminals, {} productions",
        cfg.nonterminals.len(),
        cfg.productions.len()
    );
    Ok(cfg)
}

fn verified_witness(aut: &Automaton, cfg: &Cfg) -> Result<Option<Vec<String>>, DecisionError> {
    let Some(w) = cfg.shortest_words()[cfg.start].clone() else {
        return Ok(None);
    };
    let names = cfg.word_names(&w);
    let ids = aut.encode_word(&names).map_err(|_| DecisionError::UnverifiedWitness(names.join(" ")))?;
    if !try_accepts(aut, &ids, Limits::unbounded())? {
        return Err(DecisionError::UnverifiedWitness(names.join(" ")));
    }
    Ok(Some(names))
}

/// `answer = true` iff the language is empty. A nonempty verdict carries a
/// shortest witness of the grammar, replayed through the engine.
pub fn emptiness(aut: &Automaton) -> Result<DecisionReport, DecisionError> {
    let cfg = grammar_of(aut)?;
    let empty = cfg_empty(&cfg);
    let mut r = DecisionReport::new(Question::Emptiness, if empty { Answer::Yes } else { Answer::No });
    if !empty {
        r.witness = verified_witness(aut, &cfg)?;
    }
    Ok(r)
}

/// `answer = true` iff the language is finite. An infinite verdict reports a
/// pumping cycle of the grammar.
pub fn finiteness(aut: &Automaton) -> Result<DecisionReport, DecisionError> {
    let cfg = grammar_of(aut)?;
    let cycle = cfg_cycle(&cfg);
    let mut r = DecisionReport::new(
        Question::Finiteness,
        if cycle.is_none() { Answer::Yes } else { Answer::No },
    );
    if let Some(c) = cycle {
        r.detail = Some(format!("cycle: {}", c.join(" → ")));
    }
    Ok(r)
}

/// Membership in the complement, for deterministic machines.
pub fn complement_accepts(aut: &Automaton, word: &[LetterId]) -> Result<bool, NotDeterministic> {
    Ok(run_deterministic(aut, word)?.kind != VerdictKind::Accept)
}

fn member(aut: &Automaton, word: &[String], limits: Limits) -> Result<bool, DecisionError> {
    let Ok(ids) = aut.encode_word(word) else {
        return Ok(false);
    };
    if aut.is_deterministic() {
        return Ok(!complement_accepts(aut, &ids)?);
    }
    Ok(try_accepts(aut, &ids, limits)?)
}

fn alphabet_of(machines: &[&Automaton]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for m in machines {
        for a in m.letters() {
            let name = m.letter_name(a);
            if !out.iter().any(|x| x == name) {
                out.push(name.to_string());
            }
        }
    }
    out
}

/// First word in shortlex order over `sigma` of length at most `bound`
/// satisfying `bad`.
fn search(
    sigma: &[String],
    bound: usize,
    mut bad: impl FnMut(&[String]) -> Result<bool, DecisionError>,
) -> Result<Option<Vec<String>>, DecisionError> {
    for idx in ShortLex::new(sigma.len(), bound) {
        let w: Vec<String> = idx.iter().map(|&i| sigma[i].clone()).collect();
        if bad(&w)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn bounded_report(question: Question, bound: usize, cex: Option<Vec<String>>) -> DecisionReport {
    let mut r = DecisionReport::new(
        question,
        if cex.is_some() { Answer::No } else { Answer::Unknown(bound) },
    );
    r.witness = cex;
    r.bound = Some(bound);
    r
}

/// Searches Σ^{≤bound} for a word the machine rejects.
pub fn bounded_universality(aut: &Automaton, bound: usize, limits: Limits) -> Result<DecisionReport, DecisionError> {
    let sigma = alphabet_of(&[aut]);
    let cex = search(&sigma, bound, |w| Ok(!member(aut, w, limits)?))?;
    Ok(bounded_report(Question::UniversalityBounded, bound, cex))
}

/// Searches for a word of length at most `bound` in L(a) \ L(b), over the
/// union of both alphabets.
pub fn bounded_inclusion(a: &Automaton, b: &Automaton, bound: usize, limits: Limits) -> Result<DecisionReport, DecisionError> {
    let sigma = alphabet_of(&[a, b]);
    let cex = search(&sigma, bound, |w| Ok(member(a, w, limits)? && !member(b, w, limits)?))?;
    Ok(bounded_report(Question::InclusionBounded, bound, cex))
}

/// Searches for a word of length at most `bound` in the symmetric
/// difference. Machines must run in the same mode.
pub fn bounded_equivalence(a: &Automaton, b: &Automaton, bound: usize, limits: Limits) -> Result<DecisionReport, DecisionError> {
    if a.mode() != b.mode() {
        return Err(DecisionError::ModeMismatch);
    }
    bounded_equivalence_any_mode(a, b, bound, limits)
}

/// Like [`bounded_equivalence`], each machine run in its own mode.
pub fn bounded_equivalence_any_mode(
    a: &Automaton,
    b: &Automaton,
    bound: usize,
    limits: Limits,
) -> Result<DecisionReport, DecisionError> {
    let sigma = alphabet_of(&[a, b]);
    let cex = search(&sigma, bound, |w| Ok(member(a, w, limits)? != member(b, w, limits)?))?;
    Ok(bounded_report(Question::EquivalenceBounded, bound, cex))
}

#[cfg(test)]
mod tests;
