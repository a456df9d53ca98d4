//! Input-driven pushdown automata with translucent letters.
//!
//! The crate covers the machine model and its text format ([`model`]), the
//! exact step semantics in returning and non-returning mode ([`engine`]),
//! effective transformations ([`constructions`]), emptiness/finiteness
//! decisions and bounded semi-checks ([`decision`]), membership oracles and
//! fixture machines for the witness languages ([`langlib`]), and the
//! linear-bounded-automaton computation encodings ([`valc`]).

pub mod constructions;
pub mod decision;
pub mod engine;
pub mod langlib;
pub mod model;
pub mod valc;

mod text;

pub use engine::{accepts, enumerate, run_deterministic, Limits, Verdict, VerdictKind};
pub use model::{
    Automaton, Description, Input, LetterClass, LetterId, Mode, Outcome, StackId, StateId,
    Target, Top,
};
