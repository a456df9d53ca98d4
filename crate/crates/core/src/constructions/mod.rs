//! Machine transformations: returning to non-returning simulation, union of
//! machines with identical signatures, and extraction of a letter-equivalent
//! ordinary pushdown automaton.

mod npda;

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::model::{
    signatures_compatible, Automaton, Description, Mode, Rhs, TranslucentDecl, BOTTOM_TOKEN,
    END_TOKEN,
};

pub use npda::{
    letter_equivalent_npda, npda_accepts, npda_enumerate, Npda, NpdaError, NpdaParseError,
    DEFAULT_STATE_CAP,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("expected a returning-mode machine")]
    NotReturning,
    #[error("incompatible signatures")]
    IncompatibleSignatures,
    #[error("machines run in different modes")]
    ModeMismatch,
    #[error("initial states have different translucent letters")]
    IncompatibleInitialTranslucency,
}

/// Returns `base` if unused, otherwise `base` with enough trailing primes.
pub(crate) fn fresh(used: &mut HashSet<String>, base: String) -> String {
    let mut name = base;
    while used.contains(&name) {
        name.push('\'');
    }
    used.insert(name.clone());
    name
}

fn retarget(rhs: &Rhs, f: impl Fn(&str) -> String) -> Rhs {
    match rhs {
        Rhs::Accept => Rhs::Accept,
        Rhs::Push { state, symbol } => Rhs::Push {
            state: f(state),
            symbol: symbol.clone(),
        },
        Rhs::Pop { state } => Rhs::Pop { state: f(state) },
        Rhs::Stay { state } => Rhs::Stay { state: f(state) },
    }
}

/// Simulates a returning machine in non-returning mode: every move lands in a
/// primed copy that sees nothing, so its only move is back to the original
/// state via the endmarker, with the head at the left end.
pub fn to_nonreturning(aut: &Automaton) -> Result<Automaton, ConstructionError> {
    if aut.mode() != Mode::Returning {
        return Err(ConstructionError::NotReturning);
    }
    let src = aut.to_description();
    let mut used: HashSet<String> = src.states.iter().cloned().collect();
    let primed: HashMap<String, String> = src
        .states
        .iter()
        .map(|q| (q.clone(), fresh(&mut used, format!("{q}'"))))
        .collect();
    let mut d = src.clone();
    d.mode = Some(Mode::NonReturning);
    d.states.extend(src.states.iter().map(|q| primed[q].clone()));
    let sigma: Vec<String> = aut.letters().map(|a| aut.letter_name(a).to_string()).collect();
    for q in &src.states {
        d.translucent.push(TranslucentDecl {
            state: primed[q].clone(),
            letters: sigma.clone(),
            line: None,
        });
    }
    for t in &mut d.transitions {
        t.rhs = retarget(&t.rhs, |q| primed[q].clone());
    }
    let tops: Vec<String> = std::iter::once(BOTTOM_TOKEN.to_string())
        .chain(src.stack.iter().cloned())
        .collect();
    for q in &src.states {
        for z in &tops {
            d.stay(&primed[q], END_TOKEN, z, q);
        }
    }
    Ok(d.validate().expect("simulation of a valid machine is valid").0)
}

/// Nondeterministic union of two machines with equal signatures, modes and
/// initial translucency.
pub fn union_compatible(a: &Automaton, b: &Automaton) -> Result<Automaton, ConstructionError> {
    if !signatures_compatible(a, b) {
        return Err(ConstructionError::IncompatibleSignatures);
    }
    if a.mode() != b.mode() {
        return Err(ConstructionError::ModeMismatch);
    }
    let init_tau = |m: &Automaton| -> HashSet<String> {
        m.translucent_letters(m.initial())
            .map(|l| m.letter_name(l).to_string())
            .collect()
    };
    if init_tau(a) != init_tau(b) {
        return Err(ConstructionError::IncompatibleInitialTranslucency);
    }
    let da = a.to_description();
    let db = b.to_description();
    let mut d = Description::new(a.mode());
    d.push_letters = da.push_letters.clone();
    d.pop_letters = da.pop_letters.clone();
    d.state_letters = da.state_letters.clone();
    let prefixed = |p: &str, src: &Description| -> Description {
        let mut s = src.map_states(|q| format!("{p}.{q}"));
        s.stack = s.stack.iter().map(|z| format!("{p}.{z}")).collect();
        for t in &mut s.transitions {
            if t.top != BOTTOM_TOKEN {
                t.top = format!("{p}.{}", t.top);
            }
            if let Rhs::Push { symbol, .. } = &mut t.rhs {
                *symbol = format!("{p}.{symbol}");
            }
        }
        s
    };
    let pa = prefixed("1", &da);
    let pb = prefixed("2", &db);
    let qu = "u0".to_string();
    d.states.push(qu.clone());
    d.initial = Some(qu.clone());
    d.translucent.push(TranslucentDecl {
        state: qu.clone(),
        letters: a
            .translucent_letters(a.initial())
            .map(|l| a.letter_name(l).to_string())
            .collect(),
        line: None,
    });
    for part in [&pa, &pb] {
        d.stack.extend(part.stack.iter().cloned());
        d.states.extend(part.states.iter().cloned());
        d.translucent.extend(part.translucent.iter().cloned());
        d.transitions.extend(part.transitions.iter().cloned());
    }
    // Entries of the fresh initial state; an accepting entry on either side
    // dominates.
    let mut accepting: HashSet<(String, String)> = HashSet::new();
    for part in [&pa, &pb] {
        let init = part.initial.as_deref().unwrap();
        for t in part.transitions.iter().filter(|t| t.state == init) {
            if t.rhs == Rhs::Accept {
                accepting.insert((t.input.clone(), t.top.clone()));
            }
        }
    }
    let mut emitted = HashSet::new();
    for part in [&pa, &pb] {
        let init = part.initial.as_deref().unwrap();
        for t in part.transitions.iter().filter(|t| t.state == init) {
            let key = (t.input.clone(), t.top.clone());
            if accepting.contains(&key) {
                if emitted.insert(key) {
                    d.accept(&qu, &t.input, &t.top);
                }
            } else {
                d.trans(&qu, &t.input, &t.top, t.rhs.clone());
            }
        }
    }
    Ok(d.validate().expect("union of valid machines is valid").0)
}

#[cfg(test)]
mod tests;
