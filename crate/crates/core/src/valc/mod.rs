//! Deterministic linear bounded automata, the primed encoding of their
//! accepting computations (VALC′), a membership test for it, and an
//! automaton with translucent letters for the complement.

mod invalc;

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{is_valid_token, RESERVED};
use crate::text::lines;

pub use invalc::{build_invalc, InvalcError, DEFAULT_INVALC_CAP};

pub const LEFT_END: &str = "<";
pub const RIGHT_END: &str = ">";
pub const SEPARATOR: &str = "#";
pub const MIDDLE: &str = "c";

/// A symbol of a configuration string: a tape symbol (index 0 is the left
/// endmarker, 1 the right one) or a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    T(usize),
    Q(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    L,
    R,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}", .0.join("\n"))]
pub struct LbaError(pub Vec<String>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lba {
    states: Vec<String>,
    initial: usize,
    tape: Vec<String>,
    input: Vec<usize>,
    delta: BTreeMap<(usize, usize), (usize, usize, Dir)>,
}

/// `< t1 .. t(head-1) q t(head) .. tn >`; `tape` includes both endmarkers and
/// `head` indexes the scanned cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LbaConfiguration {
    pub state: usize,
    pub tape: Vec<usize>,
    pub head: usize,
}

impl LbaConfiguration {
    pub fn syms(&self) -> Vec<Sym> {
        let mut out: Vec<Sym> = self.tape.iter().map(|&t| Sym::T(t)).collect();
        out.insert(self.head, Sym::Q(self.state));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LbaRun {
    Accepted(Vec<LbaConfiguration>),
    Rejected,
    Exceeded(usize),
}

enum Move {
    Halt,
    Crash,
    Next(LbaConfiguration),
}

fn decorate(name: &str, level: u8) -> String {
    format!("{name}{}", "'".repeat(level as usize))
}

impl Lba {
    pub fn from_text(src: &str) -> Result<Lba, LbaError> {
        let mut errs = Vec::new();
        let mut states: Vec<String> = Vec::new();
        let mut initial: Option<String> = None;
        let mut tape_names: Vec<String> = Vec::new();
        let mut input_names: Vec<String> = Vec::new();
        let mut rules: Vec<(usize, Vec<String>)> = Vec::new();
        for line in lines(src) {
            let line = match line {
                Ok(l) => l,
                Err((n, tok)) => {
                    errs.push(format!("line {n}: expected `key:` but found `{tok}`"));
                    continue;
                }
            };
            let toks: Vec<String> = line.tokens.iter().map(|s| s.to_string()).collect();
            match line.key {
                "lba.states" => states.extend(toks),
                "lba.initial" => match toks.as_slice() {
                    [q] => initial = Some(q.clone()),
                    _ => errs.push(format!("line {}: lba.initial takes one state", line.number)),
                },
                "lba.tape" => tape_names.extend(toks),
                "lba.input" => input_names.extend(toks),
                "lba.trans" => rules.push((line.number, toks)),
                k => errs.push(format!("line {}: unknown key `{k}`", line.number)),
            }
        }
        let mut seen = HashSet::new();
        for t in states.iter().chain(&tape_names) {
            let bad = RESERVED.contains(&t.as_str())
                || !is_valid_token(t)
                || t.ends_with('\'')
                || [LEFT_END, RIGHT_END, SEPARATOR, MIDDLE].contains(&t.as_str());
            if bad {
                errs.push(format!("symbol `{t}` is reserved or malformed"));
            }
            if !seen.insert(t.clone()) {
                errs.push(format!("symbol `{t}` declared twice"));
            }
        }
        let mut tape = vec![LEFT_END.to_string(), RIGHT_END.to_string()];
        tape.extend(tape_names);
        let tape_id = |s: &str| tape.iter().position(|t| t == s);
        let state_id = |s: &str| states.iter().position(|q| q == s);
        let mut input = Vec::new();
        for a in &input_names {
            match tape_id(a) {
                Some(i) if i >= 2 => input.push(i),
                _ => errs.push(format!("input letter `{a}` is not a tape symbol")),
            }
        }
        let initial = match initial.as_deref().map(state_id) {
            Some(Some(q)) => q,
            Some(None) => {
                errs.push("initial state is not declared".into());
                0
            }
            None => {
                errs.push("missing lba.initial".into());
                0
            }
        };
        let mut delta = BTreeMap::new();
        for (n, toks) in rules {
            let [q, t, arrow, p, s, d] = toks.as_slice() else {
                errs.push(format!("line {n}: expected `q t -> p t' L|R`"));
                continue;
            };
            let parsed = (state_id(q), tape_id(t), state_id(p), tape_id(s), arrow.as_str(), d.as_str());
            let (Some(q), Some(t), Some(p), Some(s), "->", "L" | "R") = parsed else {
                errs.push(format!("line {n}: unknown symbol or malformed rule"));
                continue;
            };
            let dir = if d == "L" { Dir::L } else { Dir::R };
            if (t < 2 || s < 2) && t != s {
                errs.push(format!("line {n}: endmarkers may only be rewritten by themselves"));
            }
            if t == 1 && dir == Dir::R {
                errs.push(format!("line {n}: head would leave the tape"));
            }
            if t == 0 {
                errs.push(format!("line {n}: the left endmarker is never scanned"));
            }
            if delta.insert((q, t), (p, s, dir)).is_some() {
                errs.push(format!("line {n}: duplicate rule"));
            }
        }
        if states.is_empty() {
            errs.push("no states".into());
        }
        if errs.is_empty() {
            Ok(Lba {
                states,
                initial,
                tape,
                input,
                delta,
            })
        } else {
            Err(LbaError(errs))
        }
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    /// Tape symbols, endmarkers first.
    pub fn tape_symbols(&self) -> &[String] {
        &self.tape
    }

    pub fn input_symbols(&self) -> impl Iterator<Item = &str> + '_ {
        self.input.iter().map(|&i| self.tape[i].as_str())
    }

    pub fn rule(&self, q: usize, t: usize) -> Option<(usize, usize, Dir)> {
        self.delta.get(&(q, t)).copied()
    }

    pub fn sym_name(&self, s: Sym) -> &str {
        match s {
            Sym::T(t) => &self.tape[t],
            Sym::Q(q) => &self.states[q],
        }
    }

    pub fn sym_id(&self, name: &str) -> Option<Sym> {
        if let Some(t) = self.tape.iter().position(|t| t == name) {
            return Some(Sym::T(t));
        }
        self.states.iter().position(|q| q == name).map(Sym::Q)
    }

    /// Every symbol of a configuration string: tape symbols then states.
    pub fn syms(&self) -> Vec<Sym> {
        (0..self.tape.len())
            .map(Sym::T)
            .chain((0..self.states.len()).map(Sym::Q))
            .collect()
    }

    /// All tokens of the decorated alphabet: plain, `c`, primed and
    /// double-primed symbols.
    pub fn valc_alphabet(&self) -> Vec<String> {
        let mut out = Vec::new();
        for level in 0..3u8 {
            for s in self.syms() {
                out.push(decorate(self.sym_name(s), level));
            }
            out.push(decorate(SEPARATOR, level));
            if level == 0 {
                out.push(MIDDLE.to_string());
            }
        }
        out
    }

    pub fn initial_configuration<S: AsRef<str>>(&self, input: &[S]) -> Result<LbaConfiguration, LbaError> {
        let mut tape = vec![0];
        for a in input {
            match self.tape.iter().position(|t| t == a.as_ref()) {
                Some(i) if self.input.contains(&i) => tape.push(i),
                _ => return Err(LbaError(vec![format!("`{}` is not an input letter", a.as_ref())])),
            }
        }
        tape.push(1);
        Ok(LbaConfiguration {
            state: self.initial,
            tape,
            head: 1,
        })
    }

    fn step(&self, c: &LbaConfiguration) -> Move {
        let Some((p, s, d)) = self.rule(c.state, c.tape[c.head]) else {
            return Move::Halt;
        };
        let mut next = c.clone();
        next.tape[c.head] = s;
        next.state = p;
        match d {
            Dir::L if c.head == 1 => return Move::Crash,
            Dir::L => next.head -= 1,
            Dir::R if c.head + 1 >= c.tape.len() => return Move::Crash,
            Dir::R => next.head += 1,
        }
        Move::Next(next)
    }

    /// Parses a configuration string; `None` unless it has the form
    /// `< T* q T* >` with inner symbols off the endmarkers.
    pub fn parse_configuration(&self, syms: &[Sym]) -> Option<LbaConfiguration> {
        let n = syms.len();
        if n < 3 || syms[0] != Sym::T(0) || syms[n - 1] != Sym::T(1) {
            return None;
        }
        let mut state = None;
        let mut tape = vec![0];
        for (i, s) in syms[1..n - 1].iter().enumerate() {
            match *s {
                Sym::Q(q) if state.is_none() => state = Some((q, i + 1)),
                Sym::T(t) if t >= 2 => tape.push(t),
                _ => return None,
            }
        }
        tape.push(1);
        let (state, head) = state?;
        Some(LbaConfiguration { state, tape, head })
    }

    /// Successor configuration string, `None` when halting or when the move
    /// would leave the tape.
    pub fn successor(&self, syms: &[Sym]) -> Option<Vec<Sym>> {
        match self.step(&self.parse_configuration(syms)?) {
            Move::Next(c) => Some(c.syms()),
            _ => None,
        }
    }

    pub fn is_halting(&self, syms: &[Sym]) -> bool {
        self.parse_configuration(syms)
            .is_some_and(|c| matches!(self.step(&c), Move::Halt))
    }

    pub fn format_configuration(&self, c: &LbaConfiguration) -> String {
        c.syms().iter().map(|&s| self.sym_name(s)).collect::<Vec<_>>().join(" ")
    }
}

impl fmt::Display for Lba {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lba.states: {}", self.states.join(" "))?;
        writeln!(f, "lba.initial: {}", self.states[self.initial])?;
        writeln!(f, "lba.tape: {}", self.tape[2..].join(" "))?;
        let input: Vec<&str> = self.input_symbols().collect();
        writeln!(f, "lba.input: {}", input.join(" "))?;
        for (&(q, t), &(p, s, d)) in &self.delta {
            writeln!(
                f,
                "lba.trans: {} {} -> {} {} {:?}",
                self.states[q], self.tape[t], self.states[p], self.tape[s], d
            )?;
        }
        Ok(())
    }
}

/// Number of configurations on an input of length `n`, times `n + 3`.
pub fn step_cap(lba: &Lba, n: usize) -> usize {
    let base = lba.tape.len().saturating_add(2);
    let mut cap = lba.states.len().saturating_mul(n + 3);
    for _ in 0..n + 2 {
        cap = cap.saturating_mul(base);
    }
    cap
}

/// Deterministic simulation; accepts by halting. A repeated configuration
/// means the machine cycles and rejects.
pub fn lba_run<S: AsRef<str>>(lba: &Lba, input: &[S]) -> Result<LbaRun, LbaError> {
    let mut conf = lba.initial_configuration(input)?;
    let cap = step_cap(lba, input.len());
    let mut seen = HashSet::new();
    let mut trace = vec![conf.clone()];
    loop {
        if !seen.insert(conf.clone()) {
            return Ok(LbaRun::Rejected);
        }
        if trace.len() > cap {
            return Ok(LbaRun::Exceeded(cap));
        }
        match lba.step(&conf) {
            Move::Halt => return Ok(LbaRun::Accepted(trace)),
            Move::Crash => return Ok(LbaRun::Rejected),
            Move::Next(c) => {
                trace.push(c.clone());
                conf = c;
            }
        }
    }
}

pub type ValcWord = Vec<String>;

/// The member of VALC′ for an accepted input, primed tokens placed before
/// double-primed ones. `None` for rejected inputs and for runs with an even
/// number of moves.
pub fn valc_generate<S: AsRef<str>>(lba: &Lba, input: &[S]) -> Result<Option<ValcWord>, LbaError> {
    let LbaRun::Accepted(trace) = lba_run(lba, input)? else {
        return Ok(None);
    };
    let moves = trace.len() - 1;
    if moves % 2 == 0 {
        log::warn!("run on the input makes {moves} moves; an odd number is required");
        return Ok(None);
    }
    let m = (moves - 1) / 2;
    let name = |s: Sym, level: u8| decorate(lba.sym_name(s), level);
    let mut word = Vec::new();
    for i in 0..=m {
        if i > 0 {
            word.push(SEPARATOR.to_string());
        }
        word.extend(trace[2 * i].syms().into_iter().map(|s| name(s, 0)));
    }
    word.push(MIDDLE.to_string());
    word.extend(trace[2 * m + 1].syms().into_iter().rev().map(|s| name(s, 1)));
    word.push(decorate(SEPARATOR, 1));
    for i in (0..m).rev() {
        word.extend(trace[2 * i + 1].syms().into_iter().rev().map(|s| name(s, 2)));
        if i > 0 {
            word.push(decorate(SEPARATOR, 2));
        }
    }
    Ok(Some(word))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Token {
    Middle,
    Sep(u8),
    Sym(Sym, u8),
}

fn read_token(lba: &Lba, tok: &str) -> Option<Token> {
    if tok == MIDDLE {
        return Some(Token::Middle);
    }
    let base = tok.trim_end_matches('\'');
    let level = (tok.len() - base.len()) as u8;
    if level > 2 {
        return None;
    }
    if base == SEPARATOR {
        return Some(Token::Sep(level));
    }
    lba.sym_id(base).map(|s| Token::Sym(s, level))
}

fn split_configs(items: &[Option<Sym>]) -> Vec<Vec<Sym>> {
    let mut out = vec![Vec::new()];
    for it in items {
        match it {
            None => out.push(Vec::new()),
            Some(s) => out.last_mut().unwrap().push(*s),
        }
    }
    out
}

/// Membership in VALC′.
pub fn in_valcp<S: AsRef<str>>(lba: &Lba, word: &[S]) -> bool {
    let Some(toks) = word.iter().map(|t| read_token(lba, t.as_ref())).collect::<Option<Vec<_>>>() else {
        return false;
    };
    let mid: Vec<usize> = (0..toks.len()).filter(|&i| toks[i] == Token::Middle).collect();
    let [c] = mid[..] else { return false };
    let mut left = Vec::new();
    for t in &toks[..c] {
        match *t {
            Token::Sep(0) => left.push(None),
            Token::Sym(s, 0) => left.push(Some(s)),
            _ => return false,
        }
    }
    let mut primed = Vec::new();
    let mut double = Vec::new();
    for t in &toks[c + 1..] {
        match *t {
            Token::Sep(1) => primed.push(None),
            Token::Sym(s, 1) => primed.push(Some(s)),
            Token::Sep(2) => double.push(None),
            Token::Sym(s, 2) => double.push(Some(s)),
            _ => return false,
        }
    }
    let even = split_configs(&left);
    let m = even.len() - 1;
    if primed.last() != Some(&None) {
        return false;
    }
    let last = split_configs(&primed[..primed.len() - 1]);
    let [last] = &last[..] else { return false };
    let odd_desc = if double.is_empty() { Vec::new() } else { split_configs(&double) };
    if odd_desc.len() != m {
        return false;
    }
    let mut chain: Vec<Vec<Sym>> = Vec::with_capacity(2 * m + 2);
    for i in 0..=m {
        chain.push(even[i].clone());
        let odd = if i == m { last } else { &odd_desc[m - 1 - i] };
        chain.push(odd.iter().rev().copied().collect());
    }
    let Some(w0) = lba.parse_configuration(&chain[0]) else { return false };
    if w0.state != lba.initial || w0.head != 1 || !w0.tape[1..w0.tape.len() - 1].iter().all(|t| lba.input.contains(t)) {
        return false;
    }
    if !lba.is_halting(&chain[2 * m + 1]) {
        return false;
    }
    chain.windows(2).all(|p| lba.successor(&p[0]).as_deref() == Some(&p[1][..]))
}

/// One random edit of a word: substitution, deletion, swap of neighbours or
/// a change of prime level. The result always differs from the input.
pub fn mutate_valid(lba: &Lba, word: &[String], seed: u64) -> ValcWord {
    let alphabet = lba.valc_alphabet();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut w = word.to_vec();
        if w.is_empty() {
            w.push(alphabet[rng.gen_range(0..alphabet.len())].clone());
            return w;
        }
        let i = rng.gen_range(0..w.len());
        match rng.gen_range(0..4) {
            0 => w[i] = alphabet[rng.gen_range(0..alphabet.len())].clone(),
            1 => {
                w.remove(i);
            }
            2 if w.len() > 1 => {
                let j = if i + 1 < w.len() { i + 1 } else { i - 1 };
                w.swap(i, j);
            }
            _ => {
                if w[i] == MIDDLE {
                    continue;
                }
                let base = w[i].trim_end_matches('\'').to_string();
                let level = w[i].len() - base.len();
                w[i] = decorate(&base, ((level + 1) % 3) as u8);
            }
        }
        if w != word {
            return w;
        }
    }
}

#[cfg(test)]
mod tests;
