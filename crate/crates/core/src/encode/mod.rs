//! Single-tape Turing machines, their halting encoding as q-sentences, and
//! the model built from a halting run.

mod search;
mod sentences;
mod witness;

pub use search::{bounded_search, SearchOptions};
pub use sentences::{encode_tm, encode_tm_with, succ, EncodeOptions, Group, Part, TMEncoding};
pub use witness::witness_model;

use crate::syntax::is_identifier;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    L,
    R,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuringMachine {
    pub states: Vec<String>,
    pub init: String,
    pub accept: BTreeSet<String>,
    pub reject: BTreeSet<String>,
    /// `(state, read) -> (next, write, move)` over the alphabet {0, 1}.
    pub delta: BTreeMap<(String, u8), (String, u8, Move)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TmError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("state `{0}` is both accepting and rejecting")]
    Overlap(String),
    #[error("no transition for ({0}, {1})")]
    Missing(String, u8),
    #[error("halting state `{0}` has a transition")]
    HaltingTransition(String),
    #[error("state name `{0}` is not an identifier")]
    BadName(String),
}

impl TuringMachine {
    pub fn new(
        states: Vec<String>,
        init: &str,
        accept: &[&str],
        reject: &[&str],
        delta: BTreeMap<(String, u8), (String, u8, Move)>,
    ) -> Result<TuringMachine, TmError> {
        let tm = TuringMachine {
            states,
            init: init.to_string(),
            accept: accept.iter().map(|s| s.to_string()).collect(),
            reject: reject.iter().map(|s| s.to_string()).collect(),
            delta,
        };
        tm.validate()?;
        Ok(tm)
    }

    pub fn validate(&self) -> Result<(), TmError> {
        let known: BTreeSet<&str> = self.states.iter().map(String::as_str).collect();
        for s in &self.states {
            if !is_identifier(s) {
                return Err(TmError::BadName(s.clone()));
            }
        }
        let check = |s: &str| if known.contains(s) { Ok(()) } else { Err(TmError::UnknownState(s.to_string())) };
        check(&self.init)?;
        for s in self.accept.iter().chain(&self.reject) {
            check(s)?;
        }
        if let Some(s) = self.accept.intersection(&self.reject).next() {
            return Err(TmError::Overlap(s.clone()));
        }
        for ((q, _), (q2, _, _)) in &self.delta {
            check(q)?;
            check(q2)?;
            if self.is_halting(q) {
                return Err(TmError::HaltingTransition(q.clone()));
            }
        }
        for q in &self.states {
            if !self.is_halting(q) {
                for w in [0, 1] {
                    if !self.delta.contains_key(&(q.clone(), w)) {
                        return Err(TmError::Missing(q.clone(), w));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_halting(&self, q: &str) -> bool {
        self.accept.contains(q) || self.reject.contains(q)
    }

    /// Reads `states:`, `init:`, `accept:`, `reject:` lines and transition
    /// lines `q0 0 -> q1 1 R`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<TuringMachine, TmError> {
        let mut states = None;
        let mut init = None;
        let mut accept = Vec::new();
        let mut reject = Vec::new();
        let mut delta = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let bad = |msg: &str| TmError::Parse { line, msg: msg.to_string() };
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let words = |rest: &str| rest.split_whitespace().map(str::to_string).collect::<Vec<_>>();
            if let Some(rest) = body.strip_prefix("states:") {
                states = Some(words(rest));
            } else if let Some(rest) = body.strip_prefix("init:") {
                let w = words(rest);
                if w.len() != 1 {
                    return Err(bad("init takes one state"));
                }
                init = Some(w[0].clone());
            } else if let Some(rest) = body.strip_prefix("accept:") {
                accept.extend(words(rest));
            } else if let Some(rest) = body.strip_prefix("reject:") {
                reject.extend(words(rest));
            } else {
                let w: Vec<&str> = body.split_whitespace().collect();
                if w.len() != 6 || w[2] != "->" {
                    return Err(bad("expected `state read -> state write move`"));
                }
                let sym = |s: &str| match s {
                    "0" => Ok(0u8),
                    "1" => Ok(1u8),
                    _ => Err(bad("symbols are 0 or 1")),
                };
                let mv = match w[5] {
                    "L" => Move::L,
                    "R" => Move::R,
                    _ => return Err(bad("move is L or R")),
                };
                let key = (w[0].to_string(), sym(w[1])?);
                if delta.contains_key(&key) {
                    return Err(bad("duplicate transition"));
                }
                delta.insert(key, (w[3].to_string(), sym(w[4])?, mv));
            }
        }
        let states = states.ok_or(TmError::Parse { line: 0, msg: "missing `states:` line".into() })?;
        let init = init.ok_or(TmError::Parse { line: 0, msg: "missing `init:` line".into() })?;
        let a: Vec<&str> = accept.iter().map(String::as_str).collect();
        let r: Vec<&str> = reject.iter().map(String::as_str).collect();
        TuringMachine::new(states, &init, &a, &r, delta)
    }

    /// Runs from the blank tape with the head on cell 1. A left move on
    /// cell 1 stays put.
    pub fn simulate(&self, max_steps: usize) -> Simulation {
        let mut cfg = Config { state: self.init.clone(), head: 1, tape: vec![0; 2] };
        let mut history = vec![cfg.clone()];
        for _ in 0..=max_steps {
            if self.is_halting(&cfg.state) {
                return Simulation::Halted { m: history.len(), history };
            }
            if history.len() > max_steps {
                break;
            }
            let read = cfg.tape[cfg.head];
            let (next, write, mv) = &self.delta[&(cfg.state.clone(), read)];
            cfg.tape[cfg.head] = *write;
            cfg.state = next.clone();
            match mv {
                Move::R => {
                    cfg.head += 1;
                    if cfg.tape.len() <= cfg.head {
                        cfg.tape.push(0);
                    }
                }
                Move::L => cfg.head = (cfg.head - 1).max(1),
            }
            history.push(cfg.clone());
        }
        Simulation::NotHalted
    }
}

impl fmt::Display for TuringMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &BTreeSet<String>| s.iter().cloned().collect::<Vec<_>>().join(" ");
        writeln!(f, "states: {}", self.states.join(" "))?;
        writeln!(f, "init: {}", self.init)?;
        writeln!(f, "accept: {}", join(&self.accept))?;
        writeln!(f, "reject: {}", join(&self.reject))?;
        for ((q, w), (q2, w2, mv)) in &self.delta {
            writeln!(f, "{q} {w} -> {q2} {w2} {mv:?}")?;
        }
        Ok(())
    }
}

/// State, head cell (from 1) and tape (index 0 unused).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub state: String,
    pub head: usize,
    pub tape: Vec<u8>,
}

impl Config {
    pub fn symbol(&self, cell: usize) -> u8 {
        self.tape.get(cell).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Simulation {
    /// `history[t-1]` is the configuration at time `t`; `m` is the time of
    /// the halting configuration.
    Halted { m: usize, history: Vec<Config> },
    NotHalted,
}
