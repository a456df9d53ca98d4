//! Step semantics, acceptance search, deterministic runs and enumeration.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::model::{Automaton, Input, LetterClass, LetterId, Mode, Outcome, StackId, StateId, Top};

/// A machine snapshot. `stack` is stored bottom first; the top is the last
/// element and ⊥ is implicit below index 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub state: StateId,
    pub tape: Vec<LetterId>,
    pub head: usize,
    pub stack: Vec<StackId>,
}

impl Configuration {
    pub fn initial(aut: &Automaton, word: &[LetterId]) -> Self {
        Configuration {
            state: aut.initial(),
            tape: word.to_vec(),
            head: 0,
            stack: Vec::new(),
        }
    }

    pub fn top(&self) -> Top {
        self.stack.last().map_or(Top::Bottom, |&z| Top::Symbol(z))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scan {
    Visible(usize),
    EndmarkerReached,
}

/// First index at or right of the head holding a letter that is not
/// translucent for the current state.
pub fn scan_visible(aut: &Automaton, conf: &Configuration) -> Scan {
    conf.tape[conf.head.min(conf.tape.len())..]
        .iter()
        .position(|&a| !aut.is_translucent(conf.state, a))
        .map_or(Scan::EndmarkerReached, |i| Scan::Visible(conf.head + i))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Push(StackId),
    Pop,
    None,
    Wrap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    /// Configuration the step was taken from.
    pub before: Configuration,
    pub consumed: Input,
    pub top: Top,
    pub action: Action,
    /// `None` stands for the Accept configuration.
    pub to: Option<StateId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Successor {
    Accept,
    Config(Configuration),
}

/// All successors of `conf`, each paired with the step that produced it.
/// An undefined table entry yields no successors.
pub fn step(aut: &Automaton, conf: &Configuration) -> Vec<(Step, Successor)> {
    let top = conf.top();
    let scan = scan_visible(aut, conf);
    let input = match scan {
        Scan::Visible(i) => Input::Letter(conf.tape[i]),
        Scan::EndmarkerReached => Input::End,
    };
    let Some(outcome) = aut.outcome(conf.state, input, top) else {
        return Vec::new();
    };
    let mk = |action, to| Step {
        before: conf.clone(),
        consumed: input,
        top,
        action,
        to,
    };
    let default_action = match input {
        Input::End => Action::Wrap,
        Input::Letter(a) => match aut.letter_class(a) {
            LetterClass::Pop => Action::Pop,
            _ => Action::None,
        },
    };
    match outcome {
        Outcome::Accept => vec![(mk(default_action, None), Successor::Accept)],
        Outcome::Targets(ts) => ts
            .iter()
            .map(|t| {
                let mut next = conf.clone();
                next.state = t.state;
                let action = match (scan, t.push) {
                    (Scan::Visible(i), push) => {
                        next.tape.remove(i);
                        next.head = match aut.mode() {
                            Mode::Returning => 0,
                            Mode::NonReturning => i,
                        };
                        match (aut.letter_class(conf.tape[i]), push) {
                            (_, Some(z)) => {
                                next.stack.push(z);
                                Action::Push(z)
                            }
                            (LetterClass::Pop, None) => {
                                next.stack.pop();
                                Action::Pop
                            }
                            _ => Action::None,
                        }
                    }
                    (Scan::EndmarkerReached, _) => {
                        next.head = 0;
                        Action::Wrap
                    }
                };
                (mk(action, Some(t.state)), Successor::Config(next))
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_configurations: usize,
}

impl Limits {
    pub const fn unbounded() -> Self {
        Limits {
            max_configurations: usize::MAX,
        }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_configurations: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("resource guard: more than {limit} configurations explored")]
pub struct LimitExceeded {
    pub limit: usize,
}

/// Breadth-first search for an accepting computation. Returns the shortest
/// accepting trace if one exists.
pub fn accepting_trace(
    aut: &Automaton,
    word: &[LetterId],
    limits: Limits,
) -> Result<Option<Vec<Step>>, LimitExceeded> {
    let start = Configuration::initial(aut, word);
    let mut nodes: Vec<(Configuration, Option<(usize, Step)>)> = vec![(start.clone(), None)];
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(idx) = queue.pop_front() {
        let conf = nodes[idx].0.clone();
        for (st, succ) in step(aut, &conf) {
            match succ {
                Successor::Accept => {
                    let mut trace = vec![st];
                    let mut cur = idx;
                    while let Some((parent, s)) = &nodes[cur].1 {
                        trace.push(s.clone());
                        cur = *parent;
                    }
                    trace.reverse();
                    return Ok(Some(trace));
                }
                Successor::Config(next) => {
                    if seen.insert(next.clone()) {
                        if seen.len() > limits.max_configurations {
                            return Err(LimitExceeded {
                                limit: limits.max_configurations,
                            });
                        }
                        nodes.push((next, Some((idx, st))));
                        queue.push_back(nodes.len() - 1);
                    }
                }
            }
        }
    }
    Ok(None)
}

pub fn try_accepts(aut: &Automaton, word: &[LetterId], limits: Limits) -> Result<bool, LimitExceeded> {
    let start = Configuration::initial(aut, word);
    let mut seen = HashSet::from([start.clone()]);
    let mut stack = vec![start];
    while let Some(conf) = stack.pop() {
        for (_, succ) in step(aut, &conf) {
            match succ {
                Successor::Accept => return Ok(true),
                Successor::Config(next) => {
                    if seen.insert(next.clone()) {
                        if seen.len() > limits.max_configurations {
                            return Err(LimitExceeded {
                                limit: limits.max_configurations,
                            });
                        }
                        stack.push(next);
                    }
                }
            }
        }
    }
    Ok(false)
}

/// Membership. The configuration space of a finite word is finite, so the
/// memoized search always terminates.
pub fn accepts(aut: &Automaton, word: &[LetterId]) -> bool {
    try_accepts(aut, word, Limits::unbounded()).expect("unbounded search cannot trip the guard")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictKind {
    Accept,
    RejectUndefined,
    RejectLoop,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictKind::Accept => "ACCEPT",
            VerdictKind::RejectUndefined => "REJECT(undefined)",
            VerdictKind::RejectLoop => "REJECT(loop)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub trace: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("automaton is nondeterministic")]
pub struct NotDeterministic;

pub fn run_deterministic(aut: &Automaton, word: &[LetterId]) -> Result<Verdict, NotDeterministic> {
    if !aut.is_deterministic() {
        return Err(NotDeterministic);
    }
    let mut conf = Configuration::initial(aut, word);
    let mut trace = Vec::new();
    let mut wrapped_at: HashSet<StateId> = HashSet::new();
    loop {
        if scan_visible(aut, &conf) == Scan::EndmarkerReached && !wrapped_at.insert(conf.state) {
            return Ok(Verdict {
                kind: VerdictKind::RejectLoop,
                trace,
            });
        }
        let mut succ = step(aut, &conf);
        let Some((st, next)) = succ.pop() else {
            return Ok(Verdict {
                kind: VerdictKind::RejectUndefined,
                trace,
            });
        };
        if st.consumed != Input::End {
            wrapped_at.clear();
        }
        trace.push(st);
        match next {
            Successor::Accept => {
                return Ok(Verdict {
                    kind: VerdictKind::Accept,
                    trace,
                })
            }
            Successor::Config(c) => conf = c,
        }
    }
}

/// Renders one trace line, numbered from `k`.
pub fn format_step(aut: &Automaton, k: usize, st: &Step) -> String {
    let action = match st.action {
        Action::Push(z) => format!("push({})", aut.stack_name(z)),
        Action::Pop => "pop".to_string(),
        Action::None => "none".to_string(),
        Action::Wrap => "wrap".to_string(),
    };
    let to = st.to.map_or("ACCEPT", |q| aut.state_name(q));
    let mut tape: Vec<&str> = st.before.tape.iter().map(|&a| aut.letter_name(a)).collect();
    tape.insert(st.before.head.min(tape.len()), "^");
    let stack: String = st
        .before
        .stack
        .iter()
        .rev()
        .map(|&z| format!("{} ", aut.stack_name(z)))
        .collect();
    format!(
        "{k}: {} --{}/{}--> {action} {to} | tape=\"{}\" stack=\"{stack}_\"",
        aut.state_name(st.before.state),
        aut.input_name(st.consumed),
        aut.top_name(st.top),
        tape.join(" "),
    )
}

pub fn format_trace(aut: &Automaton, trace: &[Step]) -> Vec<String> {
    trace.iter().enumerate().map(|(k, s)| format_step(aut, k, s)).collect()
}

/// Words over `k` letters in shortlex order, up to length `max_len`.
#[derive(Debug, Clone)]
pub struct ShortLex {
    k: usize,
    max_len: usize,
    next: Option<Vec<usize>>,
}

impl ShortLex {
    pub fn new(k: usize, max_len: usize) -> Self {
        ShortLex {
            k,
            max_len,
            next: Some(Vec::new()),
        }
    }
}

impl Iterator for ShortLex {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                if succ.len() < self.max_len && self.k > 0 {
                    succ = vec![0; cur.len() + 1];
                    self.next = Some(succ);
                }
                break;
            }
            i -= 1;
            if succ[i] + 1 < self.k {
                succ[i] += 1;
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(cur)
    }
}

/// Number of words of length at most `max_len` over `k` letters.
pub fn count_words(k: usize, max_len: usize) -> usize {
    (0..=max_len).map(|n| k.pow(n as u32)).sum()
}

/// Accepted words of length ≤ `max_len`, in shortlex order over `alphabet`
/// (defaults to the whole input alphabet in declaration order).
pub fn enumerate(
    aut: &Automaton,
    max_len: usize,
    alphabet: Option<&[LetterId]>,
    limits: Limits,
) -> Result<Vec<Vec<LetterId>>, LimitExceeded> {
    let all: Vec<LetterId> = aut.letters().collect();
    let sigma = alphabet.unwrap_or(&all);
    let mut out = Vec::new();
    for idx in ShortLex::new(sigma.len(), max_len) {
        let w: Vec<LetterId> = idx.iter().map(|&i| sigma[i]).collect();
        if try_accepts(aut, &w, limits)? {
            out.push(w);
        }
    }
    Ok(out)
}
