use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use super::fresh;
use crate::engine::ShortLex;
use crate::model::format::{parse_trans, write_rhs};
use crate::model::{
    is_valid_token, Automaton, Input, LetterClass, LetterId, Mode, Outcome, Rhs, StackId, Top,
    BOTTOM_TOKEN,
};
use crate::text;

/// Default bound on `|Q|·2^|Q|` for [`letter_equivalent_npda`].
pub const DEFAULT_STATE_CAP: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NpdaError {
    #[error("expected a returning-mode machine")]
    NotReturning,
    #[error("state blow-up guard: {states} states give |Q|·2^|Q| above the cap {cap}")]
    TooLarge { states: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}", .0.join("\n"))]
pub struct NpdaParseError(pub Vec<String>);

/// An input-driven pushdown automaton without translucency that reads its
/// input strictly left to right and may change state silently. It accepts
/// by being in a drain state when the input is exhausted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Npda {
    pub(crate) letters: Vec<String>,
    pub(crate) classes: Vec<LetterClass>,
    pub(crate) stack: Vec<String>,
    pub(crate) states: Vec<String>,
    pub(crate) initial: usize,
    pub(crate) drain: Vec<bool>,
    pub(crate) letter: BTreeMap<(usize, LetterId, Top), Vec<(usize, Option<StackId>)>>,
    pub(crate) silent: BTreeMap<(usize, Top), Vec<usize>>,
}

impl Npda {
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_drain(&self, q: usize) -> bool {
        self.drain[q]
    }

    pub fn letters(&self) -> impl Iterator<Item = LetterId> + '_ {
        (0..self.letters.len() as u16).map(LetterId)
    }

    pub fn letter_name(&self, a: LetterId) -> &str {
        &self.letters[a.index()]
    }

    pub fn letter_id(&self, name: &str) -> Option<LetterId> {
        self.letters.iter().position(|l| l == name).map(|i| LetterId(i as u16))
    }

    pub fn letter_class(&self, a: LetterId) -> LetterClass {
        self.classes[a.index()]
    }

    pub fn stack_count(&self) -> usize {
        self.stack.len()
    }

    pub fn stack_name(&self, z: StackId) -> &str {
        &self.stack[z.index()]
    }

    pub fn tops(&self) -> impl Iterator<Item = Top> + '_ {
        std::iter::once(Top::Bottom).chain((0..self.stack.len() as u16).map(|i| Top::Symbol(StackId(i))))
    }

    pub fn letter_moves(&self) -> impl Iterator<Item = (usize, LetterId, Top, usize, Option<StackId>)> + '_ {
        self.letter
            .iter()
            .flat_map(|(&(q, a, z), ts)| ts.iter().map(move |&(p, push)| (q, a, z, p, push)))
    }

    pub fn silent_moves(&self) -> impl Iterator<Item = (usize, Top, usize)> + '_ {
        self.silent
            .iter()
            .flat_map(|(&(q, z), ts)| ts.iter().map(move |&p| (q, z, p)))
    }

    pub fn move_count(&self) -> usize {
        self.letter_moves().count() + self.silent_moves().count()
    }

    pub fn encode_word<S: AsRef<str>>(&self, word: &[S]) -> Option<Vec<LetterId>> {
        word.iter().map(|s| self.letter_id(s.as_ref())).collect()
    }

    pub fn decode_word(&self, word: &[LetterId]) -> Vec<String> {
        word.iter().map(|&a| self.letter_name(a).to_string()).collect()
    }

    fn top_name(&self, z: Top) -> &str {
        match z {
            Top::Bottom => BOTTOM_TOKEN,
            Top::Symbol(s) => self.stack_name(s),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("kind: npda\n");
        for (key, class) in [
            ("letters.push", LetterClass::Push),
            ("letters.pop", LetterClass::Pop),
            ("letters.state", LetterClass::State),
        ] {
            let ls: Vec<&str> = self
                .letters()
                .filter(|&a| self.letter_class(a) == class)
                .map(|a| self.letter_name(a))
                .collect();
            out.push_str(&join_line(key, &ls));
        }
        out.push_str(&join_line("stack", &self.stack.iter().map(String::as_str).collect::<Vec<_>>()));
        out.push_str(&join_line("states", &self.states.iter().map(String::as_str).collect::<Vec<_>>()));
        out.push_str(&format!("initial: {}\n", self.states[self.initial]));
        let drains: Vec<&str> = (0..self.states.len())
            .filter(|&q| self.drain[q])
            .map(|q| self.state_name(q))
            .collect();
        out.push_str(&join_line("drain", &drains));
        for (q, a, z, p, push) in self.letter_moves() {
            let to = self.state_name(p).to_string();
            let rhs = match (push, self.letter_class(a)) {
                (Some(s), _) => Rhs::Push {
                    state: to,
                    symbol: self.stack_name(s).to_string(),
                },
                (None, LetterClass::Pop) => Rhs::Pop { state: to },
                _ => Rhs::Stay { state: to },
            };
            out.push_str(&format!(
                "trans: {} {} {} -> {}\n",
                self.state_name(q),
                self.letter_name(a),
                self.top_name(z),
                write_rhs(&rhs)
            ));
        }
        for (q, z, p) in self.silent_moves() {
            out.push_str(&format!(
                "silent: {} {} -> {}\n",
                self.state_name(q),
                self.top_name(z),
                self.state_name(p)
            ));
        }
        out
    }

    pub fn from_text(src: &str) -> Result<Npda, NpdaParseError> {
        let mut errs = Vec::new();
        let mut classes: Vec<(String, LetterClass)> = Vec::new();
        let mut stack = Vec::new();
        let mut states = Vec::new();
        let mut initial = None;
        let mut drains = Vec::new();
        let mut trans = Vec::new();
        let mut silent = Vec::new();
        for item in text::lines(src) {
            let line = match item {
                Ok(l) => l,
                Err((n, tok)) => {
                    errs.push(format!("line {n}: expected `key:`, found `{tok}`"));
                    continue;
                }
            };
            let n = line.number;
            let toks: Vec<String> = line.tokens.iter().map(|s| s.to_string()).collect();
            match line.key {
                "kind" if toks == ["npda"] => {}
                "letters.push" => classes.extend(toks.into_iter().map(|t| (t, LetterClass::Push))),
                "letters.pop" => classes.extend(toks.into_iter().map(|t| (t, LetterClass::Pop))),
                "letters.state" => classes.extend(toks.into_iter().map(|t| (t, LetterClass::State))),
                "stack" => stack.extend(toks),
                "states" => states.extend(toks),
                "initial" if toks.len() == 1 => initial = Some((n, toks[0].clone())),
                "drain" => drains.extend(toks.into_iter().map(|t| (n, t))),
                "trans" => match parse_trans(&line.tokens) {
                    Ok(t) => trans.push((n, t)),
                    Err(m) => errs.push(format!("line {n}: {m}")),
                },
                "silent" => match line.tokens.as_slice() {
                    [q, z, "->", p] => silent.push((n, q.to_string(), z.to_string(), p.to_string())),
                    _ => errs.push(format!("line {n}: expected `silent: <state> <top|_> -> <state>`")),
                },
                other => errs.push(format!("line {n}: unknown key `{other}`")),
            }
        }
        for tok in classes.iter().map(|(t, _)| t).chain(&stack).chain(&states) {
            if !is_valid_token(tok) {
                errs.push(format!("invalid token `{tok}`"));
            }
        }
        let index = |v: &[String]| -> HashMap<String, usize> {
            v.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()
        };
        let letters: Vec<String> = classes.iter().map(|(t, _)| t.clone()).collect();
        let li = index(&letters);
        let si = index(&stack);
        let qi = index(&states);
        if li.len() != letters.len() || si.len() != stack.len() || qi.len() != states.len() {
            errs.push("duplicate declaration".to_string());
        }
        let state = |n: usize, q: &str, errs: &mut Vec<String>| -> Option<usize> {
            let r = qi.get(q).copied();
            if r.is_none() {
                errs.push(format!("line {n}: unknown state `{q}`"));
            }
            r
        };
        let top = |n: usize, z: &str, errs: &mut Vec<String>| -> Option<Top> {
            if z == BOTTOM_TOKEN {
                return Some(Top::Bottom);
            }
            let r = si.get(z).map(|&i| Top::Symbol(StackId(i as u16)));
            if r.is_none() {
                errs.push(format!("line {n}: unknown stack symbol `{z}`"));
            }
            r
        };
        let mut m = Npda {
            letters,
            classes: classes.iter().map(|(_, c)| *c).collect(),
            stack: stack.clone(),
            states: states.clone(),
            initial: 0,
            drain: vec![false; states.len()],
            letter: BTreeMap::new(),
            silent: BTreeMap::new(),
        };
        match initial {
            Some((n, q)) => m.initial = state(n, &q, &mut errs).unwrap_or(0),
            None => errs.push("missing `initial:`".to_string()),
        }
        for (n, q) in drains {
            if let Some(q) = state(n, &q, &mut errs) {
                m.drain[q] = true;
            }
        }
        for (n, (q, a, z, rhs)) in trans {
            let qq = state(n, &q, &mut errs);
            let zz = top(n, &z, &mut errs);
            let aa = li.get(&a).copied();
            if aa.is_none() {
                errs.push(format!("line {n}: unknown letter `{a}`"));
            }
            let (p, push, want) = match &rhs {
                Rhs::Accept => {
                    errs.push(format!("line {n}: `accept` is not an npda move; use drain states"));
                    continue;
                }
                Rhs::Push { state: p, symbol } => {
                    let s = si.get(symbol).map(|&i| StackId(i as u16));
                    if s.is_none() {
                        errs.push(format!("line {n}: unknown stack symbol `{symbol}`"));
                    }
                    (p, s, LetterClass::Push)
                }
                Rhs::Pop { state: p } => (p, None, LetterClass::Pop),
                Rhs::Stay { state: p } => (p, None, LetterClass::State),
            };
            let pp = state(n, p, &mut errs);
            if let (Some(q), Some(z), Some(a), Some(p)) = (qq, zz, aa, pp) {
                if m.classes[a] != want {
                    errs.push(format!("line {n}: wrong table for letter class `{}`", m.letters[a]));
                    continue;
                }
                if want == LetterClass::Push && push.is_none() {
                    continue;
                }
                m.letter.entry((q, LetterId(a as u16), z)).or_default().push((p, push));
            }
        }
        for (n, q, z, p) in silent {
            let (qq, zz, pp) = (state(n, &q, &mut errs), top(n, &z, &mut errs), state(n, &p, &mut errs));
            if let (Some(q), Some(z), Some(p)) = (qq, zz, pp) {
                m.silent.entry((q, z)).or_default().push(p);
            }
        }
        if errs.is_empty() {
            Ok(m)
        } else {
            Err(NpdaParseError(errs))
        }
    }
}

impl fmt::Display for Npda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn join_line(key: &str, toks: &[&str]) -> String {
    if toks.is_empty() {
        format!("{key}:\n")
    } else {
        format!("{key}: {}\n", toks.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    Base(usize, u64),
    Drain(u64),
}

/// Left-to-right pushdown automaton whose language is a subset of `L(aut)`
/// with the same Parikh image.
///
/// A state `(q, S)` records the set `S` of states at which endmarker moves
/// have fired. A letter consumed later must have been translucent for every
/// state in `S`, since it was still on the tape when that endmarker move
/// happened. Letters that are never consumed before acceptance are read in a
/// drain phase at the end.
pub fn letter_equivalent_npda(aut: &Automaton, cap: usize) -> Result<Npda, NpdaError> {
    if aut.mode() != Mode::Returning {
        return Err(NpdaError::NotReturning);
    }
    let nq = aut.state_count();
    let too_large = nq > 63 || nq.checked_mul(1usize << nq).is_none_or(|v| v > cap);
    if too_large {
        return Err(NpdaError::TooLarge { states: nq, cap });
    }
    let mut stack: Vec<String> = aut.stack_symbols().map(|z| aut.stack_name(z).to_string()).collect();
    let mut used_stack: HashSet<String> = stack.iter().cloned().collect();
    let filler = StackId(stack.len() as u16);
    stack.push(fresh(&mut used_stack, "fill".to_string()));

    let mut allowed_cache: HashMap<u64, Vec<bool>> = HashMap::new();
    let mut allowed = |s: u64| -> Vec<bool> {
        allowed_cache
            .entry(s)
            .or_insert_with(|| {
                aut.letters()
                    .map(|a| {
                        aut.states()
                            .filter(|q| s >> q.0 & 1 == 1)
                            .all(|q| aut.is_translucent(q, a))
                    })
                    .collect()
            })
            .clone()
    };

    let mut m = Npda {
        letters: aut.letters().map(|a| aut.letter_name(a).to_string()).collect(),
        classes: aut.letters().map(|a| aut.letter_class(a)).collect(),
        stack,
        states: Vec::new(),
        initial: 0,
        drain: Vec::new(),
        letter: BTreeMap::new(),
        silent: BTreeMap::new(),
    };
    let mut used_names = HashSet::new();
    let mut ids: HashMap<Node, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |node: Node, m: &mut Npda, queue: &mut VecDeque<(Node, usize)>| -> usize {
        if let Some(&i) = ids.get(&node) {
            return i;
        }
        let (base, s, is_drain) = match node {
            Node::Base(q, s) => (aut.state_name(crate::model::StateId(q as u32)).to_string(), s, false),
            Node::Drain(s) => ("drain".to_string(), s, true),
        };
        let set: Vec<&str> = aut
            .states()
            .filter(|q| s >> q.0 & 1 == 1)
            .map(|q| aut.state_name(q))
            .collect();
        let name = fresh(&mut used_names, format!("{base}{{{}}}", set.join(",")));
        let i = m.states.len();
        m.states.push(name);
        m.drain.push(is_drain);
        ids.insert(node, i);
        queue.push_back((node, i));
        i
    };
    let action = |a: LetterId| match aut.letter_class(a) {
        LetterClass::Push => Some(filler),
        _ => None,
    };
    m.initial = intern(Node::Base(aut.initial().index(), 0), &mut m, &mut queue);
    while let Some((node, from)) = queue.pop_front() {
        match node {
            Node::Base(qi, s) => {
                let q = crate::model::StateId(qi as u32);
                let ok = allowed(s);
                for a in aut.letters() {
                    if aut.is_translucent(q, a) || !ok[a.index()] {
                        continue;
                    }
                    for z in aut.tops() {
                        match aut.outcome(q, Input::Letter(a), z) {
                            None => {}
                            Some(Outcome::Accept) => {
                                let d = intern(Node::Drain(s), &mut m, &mut queue);
                                m.letter.entry((from, a, z)).or_default().push((d, action(a)));
                            }
                            Some(Outcome::Targets(ts)) => {
                                for t in ts {
                                    let p = intern(Node::Base(t.state.index(), s), &mut m, &mut queue);
                                    m.letter.entry((from, a, z)).or_default().push((p, t.push));
                                }
                            }
                        }
                    }
                }
                let s2 = s | 1 << qi;
                for z in aut.tops() {
                    match aut.outcome(q, Input::End, z) {
                        None => {}
                        Some(Outcome::Accept) => {
                            let d = intern(Node::Drain(s2), &mut m, &mut queue);
                            m.silent.entry((from, z)).or_default().push(d);
                        }
                        Some(Outcome::Targets(ts)) => {
                            for t in ts {
                                let p = intern(Node::Base(t.state.index(), s2), &mut m, &mut queue);
                                m.silent.entry((from, z)).or_default().push(p);
                            }
                        }
                    }
                }
            }
            Node::Drain(s) => {
                let ok = allowed(s);
                let tops: Vec<Top> = m.tops().collect();
                for a in aut.letters().filter(|a| ok[a.index()]) {
                    for &z in &tops {
                        m.letter.entry((from, a, z)).or_default().push((from, action(a)));
                    }
                }
            }
        }
    }
    Ok(m)
}

/// True iff some left-to-right run ends in a drain state at the end of the
/// input.
pub fn npda_accepts(m: &Npda, word: &[LetterId]) -> bool {
    let start = (m.initial, 0usize, Vec::<StackId>::new());
    let mut seen = HashSet::from([start.clone()]);
    let mut todo = vec![start];
    while let Some((q, pos, stack)) = todo.pop() {
        if pos == word.len() && m.drain[q] {
            return true;
        }
        let top = stack.last().map_or(Top::Bottom, |&z| Top::Symbol(z));
        let mut next = Vec::new();
        if let Some(ps) = m.silent.get(&(q, top)) {
            next.extend(ps.iter().map(|&p| (p, pos, stack.clone())));
        }
        if let Some(&a) = word.get(pos) {
            if let Some(ts) = m.letter.get(&(q, a, top)) {
                for &(p, push) in ts {
                    let mut st = stack.clone();
                    match (push, m.letter_class(a)) {
                        (Some(z), _) => st.push(z),
                        (None, LetterClass::Pop) => {
                            st.pop();
                        }
                        _ => {}
                    }
                    next.push((p, pos + 1, st));
                }
            }
        }
        for c in next {
            if seen.insert(c.clone()) {
                todo.push(c);
            }
        }
    }
    false
}

/// Accepted words of length at most `max_len`, in shortlex order.
pub fn npda_enumerate(m: &Npda, max_len: usize) -> Vec<Vec<LetterId>> {
    let sigma: Vec<LetterId> = m.letters().collect();
    ShortLex::new(sigma.len(), max_len)
        .map(|idx| idx.iter().map(|&i| sigma[i]).collect::<Vec<_>>())
        .filter(|w| npda_accepts(m, w))
        .collect()
}
