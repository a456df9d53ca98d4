//! Machine model: alphabets, signature, translucency, the three transition
//! tables, and static validation of raw descriptions.
//!
//! A raw [`Description`] is what the text format and the constructions
//! produce; [`Description::validate`] turns it into an immutable, interned
//! [`Automaton`] or reports every violated well-formedness rule at once.

pub(crate) mod format;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use format::parse_description;

/// Tokens with a fixed meaning in the text format.
pub const RESERVED: [&str; 8] = ["_", "end", "->", "push", "pop", "none", "accept", "//"];

/// Token standing for the bottom-of-pushdown marker.
pub const BOTTOM_TOKEN: &str = "_";
/// Token standing for the right endmarker.
pub const END_TOKEN: &str = "end";

/// A symbol token is non-empty, printable, free of whitespace, does not
/// contain a comment opener and is not reserved.
pub fn is_valid_token(tok: &str) -> bool {
    !tok.is_empty()
        && !tok.contains("//")
        && tok.chars().all(|c| !c.is_whitespace() && !c.is_control())
        && !RESERVED.contains(&tok)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mode {
    Returning,
    NonReturning,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Returning => "returning",
            Mode::NonReturning => "non-returning",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which stack action a letter dictates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LetterClass {
    /// Σ_D: push one symbol.
    Push,
    /// Σ_R: pop one symbol (no-op on the bottom marker).
    Pop,
    /// Σ_N: leave the pushdown untouched.
    State,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LetterId(pub u16);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StackId(pub u16);

impl StateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl LetterId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl StackId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// What the automaton scans: an input letter or the right endmarker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Input {
    Letter(LetterId),
    End,
}

/// Topmost pushdown symbol, with the bottom marker made explicit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Top {
    Bottom,
    Symbol(StackId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Target {
    pub state: StateId,
    /// Present exactly for Σ_D entries.
    pub push: Option<StackId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Accept,
    Targets(Vec<Target>),
}

impl Outcome {
    pub fn targets(&self) -> &[Target] {
        match self {
            Outcome::Accept => &[],
            Outcome::Targets(t) => t,
        }
    }
}

/// The partition of the input alphabet into push, pop and state letters.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    pub push: BTreeSet<String>,
    pub pop: BTreeSet<String>,
    pub state: BTreeSet<String>,
}

/// Right-hand side of a transition line.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Rhs {
    Accept,
    Push { state: String, symbol: String },
    Pop { state: String },
    Stay { state: String },
}

impl Rhs {
    fn target_state(&self) -> Option<&str> {
        match self {
            Rhs::Accept => None,
            Rhs::Push { state, .. } | Rhs::Pop { state } | Rhs::Stay { state } => Some(state),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionDecl {
    pub state: String,
    /// A letter token or [`END_TOKEN`].
    pub input: String,
    /// A stack symbol or [`BOTTOM_TOKEN`].
    pub top: String,
    pub rhs: Rhs,
    pub line: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslucentDecl {
    pub state: String,
    pub letters: Vec<String>,
    pub line: Option<usize>,
}

/// Unvalidated machine description, as written in a file or assembled by a
/// construction.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Description {
    pub mode: Option<Mode>,
    pub push_letters: Vec<String>,
    pub pop_letters: Vec<String>,
    pub state_letters: Vec<String>,
    pub stack: Vec<String>,
    pub states: Vec<String>,
    pub initial: Option<String>,
    pub translucent: Vec<TranslucentDecl>,
    pub transitions: Vec<TransitionDecl>,
}

impl Description {
    pub fn new(mode: Mode) -> Self {
        Description {
            mode: Some(mode),
            ..Default::default()
        }
    }

    pub fn translucent(&mut self, state: &str, letters: &[&str]) -> &mut Self {
        self.translucent.push(TranslucentDecl {
            state: state.to_string(),
            letters: letters.iter().map(|s| s.to_string()).collect(),
            line: None,
        });
        self
    }

    pub fn trans(&mut self, state: &str, input: &str, top: &str, rhs: Rhs) -> &mut Self {
        self.transitions.push(TransitionDecl {
            state: state.to_string(),
            input: input.to_string(),
            top: top.to_string(),
            rhs,
            line: None,
        });
        self
    }

    pub fn push(&mut self, state: &str, input: &str, top: &str, to: &str, sym: &str) -> &mut Self {
        self.trans(
            state,
            input,
            top,
            Rhs::Push {
                state: to.to_string(),
                symbol: sym.to_string(),
            },
        )
    }

    pub fn pop(&mut self, state: &str, input: &str, top: &str, to: &str) -> &mut Self {
        self.trans(state, input, top, Rhs::Pop { state: to.to_string() })
    }

    pub fn stay(&mut self, state: &str, input: &str, top: &str, to: &str) -> &mut Self {
        self.trans(state, input, top, Rhs::Stay { state: to.to_string() })
    }

    pub fn accept(&mut self, state: &str, input: &str, top: &str) -> &mut Self {
        self.trans(state, input, top, Rhs::Accept)
    }

    /// Renames every state occurrence.
    pub fn map_states(&self, f: impl Fn(&str) -> String) -> Description {
        let mut d = self.clone();
        d.states = d.states.iter().map(|s| f(s)).collect();
        d.initial = d.initial.as_deref().map(&f);
        for t in &mut d.translucent {
            t.state = f(&t.state);
        }
        for t in &mut d.transitions {
            t.state = f(&t.state);
            t.rhs = match &t.rhs {
                Rhs::Accept => Rhs::Accept,
                Rhs::Push { state, symbol } => Rhs::Push {
                    state: f(state),
                    symbol: symbol.clone(),
                },
                Rhs::Pop { state } => Rhs::Pop { state: f(state) },
                Rhs::Stay { state } => Rhs::Stay { state: f(state) },
            };
        }
        d
    }

    /// Checks every well-formedness rule and interns the description.
    pub fn validate(&self) -> Result<(Automaton, Vec<Warning>), Violations> {
        Validator::default().run(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ViolationKind {
    #[error("missing `mode:` declaration")]
    MissingMode,
    #[error("missing `initial:` declaration")]
    MissingInitial,
    #[error("invalid symbol token `{0}`")]
    InvalidToken(String),
    #[error("reserved token `{0}` cannot be declared as an ordinary symbol")]
    ReservedToken(String),
    #[error("duplicate {what} `{token}`")]
    Duplicate { what: &'static str, token: String },
    #[error("signature sets not disjoint: `{0}` declared in more than one letter class")]
    SignatureOverlap(String),
    #[error("`{0}` is declared both as a letter and as a state")]
    LetterIsState(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("unknown stack symbol `{0}`")]
    UnknownStackSymbol(String),
    #[error("wrong table for letter class: `{letter}` is a {class} letter but the rule is a `{action}` rule")]
    WrongTable {
        letter: String,
        class: &'static str,
        action: &'static str,
    },
    #[error("entry ({state}, {input}, {top}) mixes `accept` with ordinary targets")]
    AcceptMixedWithTargets {
        state: String,
        input: String,
        top: String,
    },
    #[error("translucency declared twice for state `{0}`")]
    DuplicateTranslucency(String),
    #[error("unknown declaration key `{0}`")]
    UnknownKey(String),
    #[error("syntax error: {0}")]
    Syntax(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub line: Option<usize>,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.kind),
            None => write!(f, "{}", self.kind),
        }
    }
}

/// The complete list of violations found in one description.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct Violations(pub Vec<Violation>);

impl fmt::Display for Violations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl Violations {
    pub fn kinds(&self) -> impl Iterator<Item = &ViolationKind> {
        self.0.iter().map(|v| &v.kind)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: warning: {}", self.message),
            None => write!(f, "warning: {}", self.message),
        }
    }
}

/// A validated machine. Immutable; all identifiers are dense indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    mode: Mode,
    states: Vec<String>,
    initial: StateId,
    letters: Vec<String>,
    classes: Vec<LetterClass>,
    stack: Vec<String>,
    /// `tau[state][letter]`.
    tau: Vec<Vec<bool>>,
    delta: HashMap<(StateId, Input, Top), Outcome>,
    state_index: HashMap<String, StateId>,
    letter_index: HashMap<String, LetterId>,
    stack_index: HashMap<String, StackId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown letter `{0}`")]
pub struct UnknownLetter(pub String);

impl Automaton {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.states.len() as u32).map(StateId)
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q.index()]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.state_index.get(name).copied()
    }

    pub fn letter_count(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> impl Iterator<Item = LetterId> + '_ {
        (0..self.letters.len() as u16).map(LetterId)
    }

    pub fn letter_name(&self, a: LetterId) -> &str {
        &self.letters[a.index()]
    }

    pub fn letter_id(&self, name: &str) -> Option<LetterId> {
        self.letter_index.get(name).copied()
    }

    pub fn letter_class(&self, a: LetterId) -> LetterClass {
        self.classes[a.index()]
    }

    pub fn stack_count(&self) -> usize {
        self.stack.len()
    }

    pub fn stack_symbols(&self) -> impl Iterator<Item = StackId> + '_ {
        (0..self.stack.len() as u16).map(StackId)
    }

    pub fn stack_name(&self, z: StackId) -> &str {
        &self.stack[z.index()]
    }

    pub fn stack_id(&self, name: &str) -> Option<StackId> {
        self.stack_index.get(name).copied()
    }

    /// Γ ∪ {⊥}, bottom first.
    pub fn tops(&self) -> impl Iterator<Item = Top> + '_ {
        std::iter::once(Top::Bottom).chain(self.stack_symbols().map(Top::Symbol))
    }

    /// Σ followed by the endmarker.
    pub fn inputs(&self) -> impl Iterator<Item = Input> + '_ {
        self.letters().map(Input::Letter).chain(std::iter::once(Input::End))
    }

    pub fn is_translucent(&self, q: StateId, a: LetterId) -> bool {
        self.tau[q.index()][a.index()]
    }

    pub fn translucent_letters(&self, q: StateId) -> impl Iterator<Item = LetterId> + '_ {
        self.letters().filter(move |&a| self.is_translucent(q, a))
    }

    pub fn outcome(&self, q: StateId, input: Input, top: Top) -> Option<&Outcome> {
        self.delta.get(&(q, input, top))
    }

    /// All defined table entries in canonical order.
    pub fn entries(&self) -> Vec<((StateId, Input, Top), &Outcome)> {
        let mut v: Vec<_> = self.delta.iter().map(|(k, o)| (*k, o)).collect();
        v.sort_by_key(|(k, _)| *k);
        v
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        for a in self.letters() {
            let name = self.letter_name(a).to_string();
            match self.letter_class(a) {
                LetterClass::Push => sig.push.insert(name),
                LetterClass::Pop => sig.pop.insert(name),
                LetterClass::State => sig.state.insert(name),
            };
        }
        sig
    }

    /// `|δ_x(q,a,z)| ≤ 1` for every entry; `accept` counts as a single outcome.
    pub fn is_deterministic(&self) -> bool {
        self.delta.values().all(|o| o.targets().len() <= 1)
    }

    pub fn has_accept(&self) -> bool {
        self.delta.values().any(|o| matches!(o, Outcome::Accept))
    }

    pub fn input_name(&self, input: Input) -> &str {
        match input {
            Input::Letter(a) => self.letter_name(a),
            Input::End => END_TOKEN,
        }
    }

    pub fn top_name(&self, top: Top) -> &str {
        match top {
            Top::Bottom => BOTTOM_TOKEN,
            Top::Symbol(z) => self.stack_name(z),
        }
    }

    pub fn encode_word<S: AsRef<str>>(&self, word: &[S]) -> Result<Vec<LetterId>, UnknownLetter> {
        word.iter()
            .map(|s| {
                self.letter_id(s.as_ref())
                    .ok_or_else(|| UnknownLetter(s.as_ref().to_string()))
            })
            .collect()
    }

    pub fn decode_word(&self, word: &[LetterId]) -> Vec<String> {
        word.iter().map(|&a| self.letter_name(a).to_string()).collect()
    }

    /// Lowers the machine back to a raw description; validating the result
    /// yields an equal automaton.
    pub fn to_description(&self) -> Description {
        let mut d = Description::new(self.mode);
        for a in self.letters() {
            let name = self.letter_name(a).to_string();
            match self.letter_class(a) {
                LetterClass::Push => d.push_letters.push(name),
                LetterClass::Pop => d.pop_letters.push(name),
                LetterClass::State => d.state_letters.push(name),
            }
        }
        d.stack = self.stack.clone();
        d.states = self.states.clone();
        d.initial = Some(self.state_name(self.initial).to_string());
        for q in self.states() {
            d.translucent.push(TranslucentDecl {
                state: self.state_name(q).to_string(),
                letters: self
                    .translucent_letters(q)
                    .map(|a| self.letter_name(a).to_string())
                    .collect(),
                line: None,
            });
        }
        for ((q, input, top), outcome) in self.entries() {
            let state = self.state_name(q).to_string();
            let input_tok = self.input_name(input).to_string();
            let top_tok = self.top_name(top).to_string();
            let rhss: Vec<Rhs> = match outcome {
                Outcome::Accept => vec![Rhs::Accept],
                Outcome::Targets(ts) => ts
                    .iter()
                    .map(|t| {
                        let to = self.state_name(t.state).to_string();
                        match (input, t.push) {
                            (_, Some(z)) => Rhs::Push {
                                state: to,
                                symbol: self.stack_name(z).to_string(),
                            },
                            (Input::Letter(a), None)
                                if self.letter_class(a) == LetterClass::Pop =>
                            {
                                Rhs::Pop { state: to }
                            }
                            _ => Rhs::Stay { state: to },
                        }
                    })
                    .collect(),
            };
            for rhs in rhss {
                d.transitions.push(TransitionDecl {
                    state: state.clone(),
                    input: input_tok.clone(),
                    top: top_tok.clone(),
                    rhs,
                    line: None,
                });
            }
        }
        d
    }

    /// Canonical text serialization.
    pub fn to_text(&self) -> String {
        format::write_description(&self.to_description())
    }

    pub fn from_text(src: &str) -> Result<(Automaton, Vec<Warning>), Violations> {
        parse_description(src)?.validate()
    }
}

impl fmt::Display for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Two machines have compatible signatures iff their letter partitions are
/// equal as set triples.
pub fn signatures_compatible(a: &Automaton, b: &Automaton) -> bool {
    a.signature() == b.signature()
}

#[derive(Default)]
struct Validator {
    violations: Vec<Violation>,
    warnings: Vec<Warning>,
}

impl Validator {
    fn err(&mut self, line: Option<usize>, kind: ViolationKind) {
        self.violations.push(Violation { line, kind });
    }

    fn check_token(&mut self, tok: &str, line: Option<usize>) -> bool {
        if RESERVED.contains(&tok) {
            self.err(line, ViolationKind::ReservedToken(tok.to_string()));
            false
        } else if !is_valid_token(tok) {
            self.err(line, ViolationKind::InvalidToken(tok.to_string()));
            false
        } else {
            true
        }
    }

    fn run(mut self, d: &Description) -> Result<(Automaton, Vec<Warning>), Violations> {
        let mode = d.mode.unwrap_or_else(|| {
            self.err(None, ViolationKind::MissingMode);
            Mode::Returning
        });

        // Letters, interned in push/pop/state order.
        let mut letters = Vec::new();
        let mut classes = Vec::new();
        let mut letter_index: HashMap<String, LetterId> = HashMap::new();
        let groups = [
            (&d.push_letters, LetterClass::Push),
            (&d.pop_letters, LetterClass::Pop),
            (&d.state_letters, LetterClass::State),
        ];
        let mut class_of: HashMap<&str, LetterClass> = HashMap::new();
        for (group, class) in groups {
            let mut seen = HashSet::new();
            for tok in group.iter() {
                if !self.check_token(tok, None) {
                    continue;
                }
                if !seen.insert(tok.as_str()) {
                    self.err(
                        None,
                        ViolationKind::Duplicate {
                            what: "letter",
                            token: tok.clone(),
                        },
                    );
                    continue;
                }
                if let Some(prev) = class_of.get(tok.as_str()) {
                    if *prev != class {
                        self.err(None, ViolationKind::SignatureOverlap(tok.clone()));
                    }
                    continue;
                }
                class_of.insert(tok, class);
                letter_index.insert(tok.clone(), LetterId(letters.len() as u16));
                letters.push(tok.clone());
                classes.push(class);
            }
        }

        let mut stack = Vec::new();
        let mut stack_index: HashMap<String, StackId> = HashMap::new();
        for tok in &d.stack {
            if !self.check_token(tok, None) {
                continue;
            }
            if stack_index.contains_key(tok) {
                self.err(
                    None,
                    ViolationKind::Duplicate {
                        what: "stack symbol",
                        token: tok.clone(),
                    },
                );
                continue;
            }
            stack_index.insert(tok.clone(), StackId(stack.len() as u16));
            stack.push(tok.clone());
        }

        let mut states = Vec::new();
        let mut state_index: HashMap<String, StateId> = HashMap::new();
        for tok in &d.states {
            if !self.check_token(tok, None) {
                continue;
            }
            if state_index.contains_key(tok) {
                self.err(
                    None,
                    ViolationKind::Duplicate {
                        what: "state",
                        token: tok.clone(),
                    },
                );
                continue;
            }
            if letter_index.contains_key(tok) {
                self.err(None, ViolationKind::LetterIsState(tok.clone()));
            }
            state_index.insert(tok.clone(), StateId(states.len() as u32));
            states.push(tok.clone());
        }

        let initial = match &d.initial {
            None => {
                self.err(None, ViolationKind::MissingInitial);
                None
            }
            Some(name) => match state_index.get(name) {
                Some(&q) => Some(q),
                None => {
                    self.err(None, ViolationKind::UnknownState(name.clone()));
                    None
                }
            },
        };

        let mut tau = vec![vec![false; letters.len()]; states.len()];
        let mut declared = vec![false; states.len()];
        for decl in &d.translucent {
            let Some(&q) = state_index.get(&decl.state) else {
                self.err(decl.line, ViolationKind::UnknownState(decl.state.clone()));
                continue;
            };
            if declared[q.index()] {
                self.err(decl.line, ViolationKind::DuplicateTranslucency(decl.state.clone()));
                continue;
            }
            declared[q.index()] = true;
            for tok in &decl.letters {
                match letter_index.get(tok) {
                    Some(&a) => tau[q.index()][a.index()] = true,
                    None => self.err(decl.line, ViolationKind::UnknownLetter(tok.clone())),
                }
            }
        }
        for (i, name) in states.iter().enumerate() {
            if !declared[i] {
                self.warnings.push(Warning {
                    line: None,
                    message: format!("no translucency declared for state `{name}`; using the empty set"),
                });
            }
        }

        let mut delta: HashMap<(StateId, Input, Top), Outcome> = HashMap::new();
        let mut mixed: HashSet<(StateId, Input, Top)> = HashSet::new();
        for t in &d.transitions {
            let line = t.line;
            let q = state_index.get(&t.state).copied();
            if q.is_none() {
                self.err(line, ViolationKind::UnknownState(t.state.clone()));
            }
            let input = if t.input == END_TOKEN {
                Some(Input::End)
            } else {
                match letter_index.get(&t.input) {
                    Some(&a) => Some(Input::Letter(a)),
                    None => {
                        self.err(line, ViolationKind::UnknownLetter(t.input.clone()));
                        None
                    }
                }
            };
            let top = if t.top == BOTTOM_TOKEN {
                Some(Top::Bottom)
            } else {
                match stack_index.get(&t.top) {
                    Some(&z) => Some(Top::Symbol(z)),
                    None => {
                        self.err(line, ViolationKind::UnknownStackSymbol(t.top.clone()));
                        None
                    }
                }
            };
            let to = match t.rhs.target_state() {
                None => None,
                Some(name) => match state_index.get(name) {
                    Some(&p) => Some(p),
                    None => {
                        self.err(line, ViolationKind::UnknownState(name.to_string()));
                        None
                    }
                },
            };
            // Table membership is decided by the scanned letter's class.
            let class = match input {
                Some(Input::Letter(a)) => Some(classes[a.index()]),
                Some(Input::End) => Some(LetterClass::State),
                None => None,
            };
            let (action, wanted) = match &t.rhs {
                Rhs::Accept => ("accept", None),
                Rhs::Push { .. } => ("push", Some(LetterClass::Push)),
                Rhs::Pop { .. } => ("pop", Some(LetterClass::Pop)),
                Rhs::Stay { .. } => ("none", Some(LetterClass::State)),
            };
            if let (Some(c), Some(w)) = (class, wanted) {
                if c != w {
                    self.err(
                        line,
                        ViolationKind::WrongTable {
                            letter: t.input.clone(),
                            class: match (c, input) {
                                (_, Some(Input::End)) => "endmarker",
                                (LetterClass::Push, _) => "push",
                                (LetterClass::Pop, _) => "pop",
                                (LetterClass::State, _) => "state",
                            },
                            action,
                        },
                    );
                    continue;
                }
            }
            let push = match &t.rhs {
                Rhs::Push { symbol, .. } => match stack_index.get(symbol) {
                    Some(&z) => Some(z),
                    None => {
                        if symbol == BOTTOM_TOKEN {
                            self.err(line, ViolationKind::ReservedToken(symbol.clone()));
                        } else {
                            self.err(line, ViolationKind::UnknownStackSymbol(symbol.clone()));
                        }
                        continue;
                    }
                },
                _ => None,
            };
            let (Some(q), Some(input), Some(top)) = (q, input, top) else {
                continue;
            };
            let key = (q, input, top);
            match (&t.rhs, to) {
                (Rhs::Accept, _) => match delta.get(&key) {
                    Some(Outcome::Targets(_)) => {
                        mixed.insert(key);
                    }
                    _ => {
                        delta.insert(key, Outcome::Accept);
                    }
                },
                (_, Some(p)) => {
                    let target = Target { state: p, push };
                    match delta.entry(key).or_insert_with(|| Outcome::Targets(Vec::new())) {
                        Outcome::Accept => {
                            mixed.insert(key);
                        }
                        Outcome::Targets(ts) => {
                            if !ts.contains(&target) {
                                ts.push(target);
                            }
                        }
                    }
                }
                (_, None) => {}
            }
        }
        let mut mixed: Vec<_> = mixed.into_iter().collect();
        mixed.sort();
        for (q, input, top) in mixed {
            self.err(
                None,
                ViolationKind::AcceptMixedWithTargets {
                    state: states[q.index()].clone(),
                    input: match input {
                        Input::Letter(a) => letters[a.index()].clone(),
                        Input::End => END_TOKEN.to_string(),
                    },
                    top: match top {
                        Top::Bottom => BOTTOM_TOKEN.to_string(),
                        Top::Symbol(z) => stack[z.index()].clone(),
                    },
                },
            );
        }

        if !self.violations.is_empty() {
            return Err(Violations(self.violations));
        }
        let aut = Automaton {
            mode,
            states,
            initial: initial.expect("initial checked above"),
            letters,
            classes,
            stack,
            tau,
            delta,
            state_index,
            letter_index,
            stack_index,
        };
        Ok((aut, self.warnings))
    }
}

#[cfg(test)]
mod tests;
