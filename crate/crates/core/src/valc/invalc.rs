use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use super::{decorate, Dir, Lba, Sym, MIDDLE, SEPARATOR};
use crate::model::{Automaton, Description, Mode, Rhs, BOTTOM_TOKEN, END_TOKEN};

/// Default bound on the number of control states of [`build_invalc`].
pub const DEFAULT_INVALC_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvalcError {
    #[error("construction size guard: more than {0} states")]
    TooLarge(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Letter {
    Sym(Sym, u8),
    Sep(u8),
    Middle,
}

impl Letter {
    fn level(self) -> Option<u8> {
        match self {
            Letter::Sym(_, l) | Letter::Sep(l) => Some(l),
            Letter::Middle => None,
        }
    }

    /// The configuration symbol, `None` for separators.
    fn sym(self) -> Option<Sym> {
        match self {
            Letter::Sym(s, _) => Some(s),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Z {
    Hash,
    Other,
    Mark,
}

/// One cell of a four-symbol window around a position `k`: `None` while not
/// yet read, `Some(None)` outside the configuration.
type Slot = Option<Option<Sym>>;
type Window = [Slot; 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Verdict {
    Sym(Sym),
    Undefined,
    Dead,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Settle {
    Known(Sym),
    Undefined,
    Dead,
    Pending,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Left {
    Start,
    InitOpen,
    InitBody,
    Sep,
    Open,
    Pre,
    Post,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Primed {
    Start,
    Pre(usize),
    Post,
    Closed,
    Done,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Double {
    Start,
    Pre,
    Post,
    Closed,
    Sep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Format {
    Left(Left),
    Right(Primed, Double),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum St {
    Start,
    Format(Format),
    AlignPush(bool),
    AlignPrimed(bool),
    AlignDouble,
    ShiftPush,
    ShiftPop(bool),
    EvenPre,
    EvenWin(Window),
    EvenCarry(Sym),
    EvenPrimed(Sym),
    EvenDouble(Sym),
    OddPre,
    OddMark(Sym),
    OddCarry(Sym),
    OddPop(Sym, Option<Sym>),
    OddWin(Sym, Window),
}

enum Out {
    Accept,
    Next(Vec<(St, Option<Z>)>),
}

struct Builder<'a> {
    lba: &'a Lba,
    syms: Vec<Sym>,
    letters: Vec<Letter>,
    memo: HashMap<Window, Settle>,
}

impl<'a> Builder<'a> {
    fn is_inner(&self, s: Sym) -> bool {
        matches!(s, Sym::T(t) if t >= 2)
    }

    /// The symbol at position `k` of the successor configuration, given the
    /// symbols at `k-1 .. k+2`.
    fn succ_at(&self, w: [Option<Sym>; 4]) -> Verdict {
        let is_q = |s: Option<Sym>| matches!(s, Some(Sym::Q(_)));
        let states = w[..3].iter().filter(|s| is_q(**s)).count() + usize::from(is_q(w[2]) && is_q(w[3]));
        if states > 1 {
            return Verdict::Dead;
        }
        let rule = |q: Option<Sym>, y: Option<Sym>| -> Result<(usize, usize, Dir), Verdict> {
            match (q, y) {
                (Some(Sym::Q(q)), Some(Sym::T(y))) if y != 0 => self.lba.rule(q, y).ok_or(Verdict::Undefined),
                _ => Err(Verdict::Dead),
            }
        };
        let tape = |s: Option<Sym>| match s {
            Some(Sym::T(t)) => Ok(Sym::T(t)),
            _ => Err(Verdict::Dead),
        };
        let r = if is_q(w[1]) {
            rule(w[1], w[2]).and_then(|(_, s, d)| match d {
                Dir::R => Ok(Sym::T(s)),
                Dir::L => match w[0] {
                    Some(Sym::T(0)) => Err(Verdict::Undefined),
                    x => tape(x),
                },
            })
        } else if is_q(w[0]) {
            rule(w[0], w[1]).map(|(p, s, d)| match d {
                Dir::R => Sym::Q(p),
                Dir::L => Sym::T(s),
            })
        } else if is_q(w[2]) {
            rule(w[2], w[3]).and_then(|(p, _, d)| match d {
                Dir::R => tape(w[1]),
                Dir::L => Ok(Sym::Q(p)),
            })
        } else {
            tape(w[1])
        };
        match r {
            Ok(s) => Verdict::Sym(s),
            Err(v) => v,
        }
    }

    /// Decides the successor symbol as soon as every completion of the
    /// unread cells that is not malformed yields the same answer.
    fn settle(&mut self, w: Window) -> Settle {
        if let Some(s) = self.memo.get(&w) {
            return *s;
        }
        let mut cands: Vec<Option<Sym>> = self.syms.iter().map(|&s| Some(s)).collect();
        cands.push(None);
        let mut outcomes = BTreeSet::new();
        let mut full = [None; 4];
        self.completions(&w, 0, &mut full, &cands, &mut outcomes);
        let res = match outcomes.len() {
            0 => Settle::Dead,
            1 => match outcomes.into_iter().next().unwrap() {
                Err(()) => Settle::Undefined,
                Ok(s) => Settle::Known(s),
            },
            _ => Settle::Pending,
        };
        self.memo.insert(w, res);
        res
    }

    fn completions(
        &self,
        w: &Window,
        i: usize,
        full: &mut [Option<Sym>; 4],
        cands: &[Option<Sym>],
        out: &mut BTreeSet<Result<Sym, ()>>,
    ) {
        if out.len() > 1 {
            return;
        }
        if i == 4 {
            match self.succ_at(*full) {
                Verdict::Sym(s) => {
                    out.insert(Ok(s));
                }
                Verdict::Undefined => {
                    out.insert(Err(()));
                }
                Verdict::Dead => {}
            }
            return;
        }
        match w[i] {
            Some(v) => {
                full[i] = v;
                self.completions(w, i + 1, full, cands, out);
            }
            None => {
                for &c in cands {
                    full[i] = c;
                    self.completions(w, i + 1, full, cands, out);
                }
            }
        }
    }

    fn translucent(&self, st: &St) -> Vec<Letter> {
        let level = match st {
            St::AlignPrimed(_) | St::EvenPrimed(_) => 2,
            St::ShiftPop(_) | St::OddPop(..) | St::OddWin(..) => 1,
            _ => return Vec::new(),
        };
        self.letters.iter().copied().filter(|l| l.level() == Some(level)).collect()
    }

    fn plain_push(a: Letter) -> Z {
        if a == Letter::Sep(0) {
            Z::Hash
        } else {
            Z::Other
        }
    }

    fn moves(&mut self, st: St, a: Option<Letter>, top: Option<Z>) -> Out {
        if st == St::Start {
            let mut all = Vec::new();
            for init in [
                St::Format(Format::Left(Left::Start)),
                St::AlignPush(false),
                St::ShiftPush,
                St::EvenPre,
                St::OddPre,
            ] {
                match self.moves(init, a, top) {
                    Out::Accept => return Out::Accept,
                    Out::Next(v) => all.extend(v),
                }
            }
            return Out::Next(all);
        }
        let die = Out::Next(Vec::new());
        let go = |s: St, z: Option<Z>| Out::Next(vec![(s, z)]);
        let plain = a.filter(|l| l.level() == Some(0));
        match st {
            St::Start => unreachable!(),
            St::Format(f) => match self.format_step(f, a) {
                None => Out::Accept,
                Some(None) => die,
                Some(Some(f2)) => go(St::Format(f2), Some(Z::Other)),
            },
            St::AlignPush(hash) => match a {
                Some(Letter::Middle) => go(St::AlignPrimed(hash), None),
                Some(l) if plain.is_some() => go(St::AlignPush(hash || l == Letter::Sep(0)), Some(Self::plain_push(l))),
                _ => die,
            },
            St::ShiftPush => match a {
                Some(Letter::Middle) => go(St::ShiftPop(false), None),
                Some(l) if plain.is_some() => go(St::ShiftPush, Some(Self::plain_push(l))),
                _ => die,
            },
            St::AlignPrimed(hash) => match a {
                Some(l) if l.level() == Some(1) => {
                    let is_sep = l == Letter::Sep(1);
                    match top {
                        None if is_sep && !hash => go(St::AlignPrimed(hash), None),
                        None => Out::Accept,
                        Some(z) if (z == Z::Hash) != is_sep => Out::Accept,
                        Some(_) => go(St::AlignPrimed(hash), None),
                    }
                }
                None => go(St::AlignDouble, None),
                _ => die,
            },
            St::AlignDouble => match a {
                Some(l) if l.level() == Some(2) => match top {
                    None => Out::Accept,
                    Some(z) if (z == Z::Hash) != (l == Letter::Sep(2)) => Out::Accept,
                    Some(_) => go(St::AlignDouble, None),
                },
                None if top.is_some() => Out::Accept,
                _ => die,
            },
            St::ShiftPop(any) => match a {
                Some(l) if l.level() == Some(2) => match top {
                    None => Out::Accept,
                    Some(z) if (z == Z::Hash) != (l == Letter::Sep(2)) => Out::Accept,
                    Some(_) => go(St::ShiftPop(true), None),
                },
                None if any && top != Some(Z::Hash) => Out::Accept,
                _ => die,
            },
            St::EvenPre => match plain {
                Some(l) => {
                    let mut v = vec![(St::EvenPre, Some(Self::plain_push(l)))];
                    if let Some(s) = l.sym() {
                        v.push((St::EvenWin([Some(Some(s)), None, None, None]), Some(Z::Other)));
                    }
                    Out::Next(v)
                }
                None => die,
            },
            St::EvenWin(w) => {
                if w[1].is_none() {
                    return match plain.and_then(Letter::sym) {
                        Some(s) => self.even_settled([w[0], Some(Some(s)), None, None], Some(Z::Mark)),
                        None => die,
                    };
                }
                let mut w2 = w;
                match a {
                    Some(Letter::Middle) => {
                        for c in w2.iter_mut().filter(|c| c.is_none()) {
                            *c = Some(None);
                        }
                        match self.settle(w2) {
                            Settle::Known(e) => self.moves(St::EvenCarry(e), a, top),
                            Settle::Undefined => Out::Accept,
                            _ => die,
                        }
                    }
                    Some(l) if plain.is_some() => {
                        let i = w2.iter().position(|c| c.is_none()).unwrap();
                        match l.sym() {
                            Some(s) => w2[i] = Some(Some(s)),
                            None => {
                                for c in w2[i..].iter_mut() {
                                    *c = Some(None);
                                }
                            }
                        }
                        self.even_settled(w2, Some(Self::plain_push(l)))
                    }
                    _ => die,
                }
            }
            St::EvenCarry(e) => match a {
                Some(Letter::Middle) => go(St::EvenPrimed(e), None),
                Some(l) if plain.is_some() => go(st, Some(Self::plain_push(l))),
                _ => die,
            },
            St::EvenPrimed(e) | St::EvenDouble(e) => {
                let level = if matches!(st, St::EvenPrimed(_)) { 1 } else { 2 };
                match a {
                    Some(l) if l.level() == Some(level) => {
                        if top == Some(Z::Mark) {
                            if l.sym() == Some(e) {
                                die
                            } else {
                                Out::Accept
                            }
                        } else {
                            go(st, None)
                        }
                    }
                    None if level == 1 => go(St::EvenDouble(e), None),
                    _ => die,
                }
            }
            St::OddPre => match plain {
                Some(l) => {
                    let mut v = vec![(St::OddPre, Some(Self::plain_push(l)))];
                    if let Some(s) = l.sym() {
                        v.push((St::OddMark(s), Some(Z::Other)));
                    }
                    Out::Next(v)
                }
                None => die,
            },
            St::OddMark(s) => match plain.and_then(Letter::sym) {
                Some(_) => go(St::OddCarry(s), Some(Z::Mark)),
                None => die,
            },
            St::OddCarry(s) => match a {
                Some(Letter::Middle) => go(St::OddPop(s, None), None),
                Some(l) if plain.is_some() => go(st, Some(Self::plain_push(l))),
                _ => die,
            },
            St::OddPop(s, last) => match a {
                Some(l) if l.level() == Some(2) => {
                    if top == Some(Z::Mark) {
                        match l.sym() {
                            Some(x) => self.odd_settled(s, [None, None, Some(Some(x)), Some(last)]),
                            None => die,
                        }
                    } else {
                        go(St::OddPop(s, l.sym()), None)
                    }
                }
                _ => die,
            },
            St::OddWin(s, w) => {
                let mut w2 = w;
                let i = w2.iter().rposition(|c| c.is_none()).unwrap();
                match a.map(|l| (l.level(), l.sym())) {
                    Some((Some(2), Some(x))) => w2[i] = Some(Some(x)),
                    Some((Some(2), None)) | None => {
                        for c in w2[..=i].iter_mut() {
                            *c = Some(None);
                        }
                    }
                    _ => return die,
                }
                self.odd_settled(s, w2)
            }
        }
    }

    fn even_settled(&mut self, w: Window, push: Option<Z>) -> Out {
        match self.settle(w) {
            Settle::Known(e) => Out::Next(vec![(St::EvenCarry(e), push)]),
            Settle::Undefined => Out::Accept,
            Settle::Dead => Out::Next(Vec::new()),
            Settle::Pending => Out::Next(vec![(St::EvenWin(w), push)]),
        }
    }

    fn odd_settled(&mut self, s: Sym, w: Window) -> Out {
        match self.settle(w) {
            Settle::Known(e) if e != s => Out::Accept,
            Settle::Undefined => Out::Accept,
            Settle::Pending => Out::Next(vec![(St::OddWin(s, w), None)]),
            _ => Out::Next(Vec::new()),
        }
    }

    /// Format automaton: `None` on a violation, `Some(None)` at a well-formed
    /// end of input, otherwise the next state.
    fn format_step(&self, f: Format, a: Option<Letter>) -> Option<Option<Format>> {
        let lba = self.lba;
        let Some(a) = a else {
            return match f {
                Format::Right(Primed::Done, Double::Start | Double::Closed) => Some(None),
                _ => None,
            };
        };
        let inner = |l: Letter| l.sym().is_some_and(|s| self.is_inner(s));
        let state = |l: Letter| matches!(l.sym(), Some(Sym::Q(_)));
        let at = |l: Letter, s: Sym| l.sym() == Some(s);
        let next = match f {
            Format::Left(left) => {
                if a == Letter::Middle {
                    return (left == Left::Sep).then_some(Some(Format::Right(Primed::Start, Double::Start)));
                }
                if a.level() != Some(0) {
                    return None;
                }
                Format::Left(match left {
                    Left::Start if at(a, Sym::T(0)) => Left::InitOpen,
                    Left::InitOpen if at(a, Sym::Q(lba.initial)) => Left::InitBody,
                    Left::InitBody if a.sym().is_some_and(|s| matches!(s, Sym::T(t) if lba.input.contains(&t))) => {
                        Left::InitBody
                    }
                    Left::InitBody | Left::Post if at(a, Sym::T(1)) => Left::Sep,
                    Left::Sep if a == Letter::Sep(0) => Left::Open,
                    Left::Open if at(a, Sym::T(0)) => Left::Pre,
                    Left::Pre if inner(a) => Left::Pre,
                    Left::Pre if state(a) => Left::Post,
                    Left::Post if inner(a) => Left::Post,
                    _ => return None,
                })
            }
            Format::Right(p, d) => match a.level() {
                Some(1) => {
                    let p2 = match p {
                        Primed::Start if at(a, Sym::T(1)) => Primed::Pre(1),
                        Primed::Pre(_) if inner(a) => match a.sym() {
                            Some(Sym::T(t)) => Primed::Pre(t),
                            _ => unreachable!(),
                        },
                        Primed::Pre(y) if state(a) => match a.sym() {
                            Some(Sym::Q(q)) if lba.rule(q, y).is_none() => Primed::Post,
                            _ => return None,
                        },
                        Primed::Post if inner(a) => Primed::Post,
                        Primed::Post if at(a, Sym::T(0)) => Primed::Closed,
                        Primed::Closed if a == Letter::Sep(1) => Primed::Done,
                        _ => return None,
                    };
                    Format::Right(p2, d)
                }
                Some(2) => {
                    let d2 = match d {
                        Double::Start | Double::Sep if at(a, Sym::T(1)) => Double::Pre,
                        Double::Pre if inner(a) => Double::Pre,
                        Double::Pre if state(a) => Double::Post,
                        Double::Post if inner(a) => Double::Post,
                        Double::Post if at(a, Sym::T(0)) => Double::Closed,
                        Double::Closed if a == Letter::Sep(2) => Double::Sep,
                        _ => return None,
                    };
                    Format::Right(p, d2)
                }
                _ => return None,
            },
        };
        Some(Some(next))
    }
}

/// A returning nondeterministic machine accepting the complement of VALC′.
/// The first consumed letter chooses among a format check, two alignment
/// checks and two successor checks at a guessed position.
pub fn build_invalc(lba: &Lba, cap: usize) -> Result<Automaton, InvalcError> {
    let syms = lba.syms();
    let mut letters = Vec::new();
    for level in 0..3u8 {
        letters.extend(syms.iter().map(|&s| Letter::Sym(s, level)));
        letters.push(Letter::Sep(level));
        if level == 0 {
            letters.push(Letter::Middle);
        }
    }
    let name = |l: Letter| match l {
        Letter::Sym(s, level) => decorate(lba.sym_name(s), level),
        Letter::Sep(level) => decorate(SEPARATOR, level),
        Letter::Middle => MIDDLE.to_string(),
    };
    let mut b = Builder {
        lba,
        syms,
        letters: letters.clone(),
        memo: HashMap::new(),
    };
    let mut d = Description::new(Mode::Returning);
    let by_level = |lv: u8| -> Vec<String> {
        letters.iter().filter(|l| l.level() == Some(lv)).map(|&l| name(l)).collect()
    };
    d.push_letters = by_level(0);
    d.state_letters = vec![MIDDLE.to_string()];
    d.pop_letters = by_level(1);
    d.pop_letters.extend(by_level(2));
    d.stack = vec!["H".into(), "O".into(), "K".into()];
    let zname = |z: Option<Z>| match z {
        None => BOTTOM_TOKEN,
        Some(Z::Hash) => "H",
        Some(Z::Other) => "O",
        Some(Z::Mark) => "K",
    };
    let mut ids: HashMap<St, usize> = HashMap::from([(St::Start, 0)]);
    let mut order = vec![St::Start];
    let mut queue = VecDeque::from([St::Start]);
    let tops = [None, Some(Z::Hash), Some(Z::Other), Some(Z::Mark)];
    while let Some(st) = queue.pop_front() {
        let q = format!("@{}", ids[&st]);
        let hidden = b.translucent(&st);
        let hidden_names: Vec<String> = hidden.iter().map(|&l| name(l)).collect();
        d.translucent(&q, &hidden_names.iter().map(String::as_str).collect::<Vec<_>>());
        let inputs: Vec<Option<Letter>> = letters
            .iter()
            .filter(|l| !hidden.contains(l))
            .map(|&l| Some(l))
            .chain([None])
            .collect();
        for a in inputs {
            let input = a.map_or(END_TOKEN.to_string(), name);
            for top in tops {
                match b.moves(st, a, top) {
                    Out::Accept => {
                        d.accept(&q, &input, zname(top));
                    }
                    Out::Next(v) => {
                        let mut seen = BTreeSet::new();
                        for (next, push) in v {
                            let id = *ids.entry(next).or_insert_with(|| {
                                order.push(next);
                                queue.push_back(next);
                                order.len() - 1
                            });
                            if !seen.insert((id, push)) {
                                continue;
                            }
                            let to = format!("@{id}");
                            let rhs = match (a.and_then(Letter::level), push) {
                                (Some(0), Some(z)) => Rhs::Push {
                                    state: to,
                                    symbol: zname(Some(z)).to_string(),
                                },
                                (Some(_), _) => Rhs::Pop { state: to },
                                _ => Rhs::Stay { state: to },
                            };
                            d.trans(&q, &input, zname(top), rhs);
                        }
                    }
                }
            }
        }
        if order.len() > cap {
            return Err(InvalcError::TooLarge(cap));
        }
    }
    d.states = (0..order.len()).map(|i| format!("@{i}")).collect();
    d.initial = Some("@0".into());
    log::debug!("invalc: {} states, {} transitions", d.states.len(), d.transitions.len());
    Ok(d.validate().expect("constructed machine is valid").0)
}
