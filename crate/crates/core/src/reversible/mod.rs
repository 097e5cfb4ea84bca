//! Multi-tape Turing machines in quadruple form: each rule acts on every
//! tape either by a read/write or by a head move, never both.
//!
//! A machine is deterministic when no two rules can fire on the same
//! configuration, and reversible when additionally no two rules can produce
//! the same one; then every rule has a well-defined inverse.

mod build;
mod fixtures;
mod protocol;
mod sim;
#[cfg(test)]
mod suite;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use build::{
    bennett_compile, chain, copy_machine, embed, history_machine, normalize, space_forward, swap_machine, Compiled,
    CopyEnd,
};
pub use fixtures::{builtin, builtin_names};
pub use protocol::{
    code_tape, erasure_audit, fig1_protocol, fig2_concat, ErasureAudit, ProtocolError, ProtocolReport, RevProgram,
    RowSnapshot, StageSummary,
};
pub use sim::{replay, run_tm, Configuration, Machine, RunStatus, Step, Tape, Trace};

pub type Symbol = Arc<str>;
pub type State = Arc<str>;

pub const BLANK: &str = "_";

pub fn sym(s: &str) -> Symbol {
    Arc::from(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    L,
    N,
    R,
}

impl Move {
    pub fn delta(self) -> i64 {
        match self {
            Move::L => -1,
            Move::N => 0,
            Move::R => 1,
        }
    }

    pub fn inverse(self) -> Move {
        match self {
            Move::L => Move::R,
            Move::N => Move::N,
            Move::R => Move::L,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    Rw { read: Symbol, write: Symbol },
    Move(Move),
}

impl Action {
    pub fn rw(read: &str, write: &str) -> Self {
        Action::Rw { read: sym(read), write: sym(write) }
    }

    pub fn inverse(&self) -> Action {
        match self {
            Action::Rw { read, write } => Action::Rw { read: write.clone(), write: read.clone() },
            Action::Move(m) => Action::Move(m.inverse()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub from: State,
    pub actions: Vec<Action>,
    pub to: State,
}

impl Rule {
    pub fn new(from: &str, actions: Vec<Action>, to: &str) -> Self {
        Rule { from: sym(from), actions, to: sym(to) }
    }

    pub fn inverse(&self) -> Rule {
        Rule { from: self.to.clone(), actions: self.actions.iter().map(Action::inverse).collect(), to: self.from.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TMSpec {
    pub tapes: usize,
    pub rules: Vec<Rule>,
    pub start: State,
    pub halt: State,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("rule {rule} acts on {got} tapes, machine has {want}")]
    Arity { rule: usize, got: usize, want: usize },
    #[error("rules overlap in domain: {0:?}")]
    NotDeterministic(Vec<(usize, usize)>),
    #[error("rules overlap in range: {0:?}")]
    NotReversible(Vec<(usize, usize)>),
    #[error("unknown builtin machine {0:?}")]
    UnknownBuiltin(String),
}

fn domains_overlap(a: &Rule, b: &Rule) -> bool {
    a.from == b.from
        && !a.actions.iter().zip(&b.actions).any(|pair| match pair {
            (Action::Rw { read: r1, .. }, Action::Rw { read: r2, .. }) => r1 != r2,
            _ => false,
        })
}

fn ranges_overlap(a: &Rule, b: &Rule) -> bool {
    a.to == b.to
        && !a.actions.iter().zip(&b.actions).any(|pair| match pair {
            (Action::Rw { write: w1, .. }, Action::Rw { write: w2, .. }) => w1 != w2,
            _ => false,
        })
}

fn overlapping(rules: &[Rule], test: fn(&Rule, &Rule) -> bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..rules.len() {
        for j in i + 1..rules.len() {
            if test(&rules[i], &rules[j]) {
                out.push((i, j));
            }
        }
    }
    out
}

impl TMSpec {
    pub fn new(tapes: usize, rules: Vec<Rule>, start: &str, halt: &str) -> Self {
        TMSpec { tapes, rules, start: sym(start), halt: sym(halt) }
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        for (i, r) in self.rules.iter().enumerate() {
            if r.actions.len() != self.tapes {
                return Err(SpecError::Arity { rule: i, got: r.actions.len(), want: self.tapes });
            }
        }
        Ok(())
    }

    /// Pairs of rules that could both fire on one configuration.
    pub fn domain_overlaps(&self) -> Vec<(usize, usize)> {
        overlapping(&self.rules, domains_overlap)
    }

    /// Pairs of rules that could both produce one configuration.
    pub fn range_overlaps(&self) -> Vec<(usize, usize)> {
        overlapping(&self.rules, ranges_overlap)
    }

    pub fn check_deterministic(&self) -> Result<(), SpecError> {
        let o = self.domain_overlaps();
        if o.is_empty() {
            Ok(())
        } else {
            Err(SpecError::NotDeterministic(o))
        }
    }

    pub fn check_reversible(&self) -> Result<(), SpecError> {
        self.check_deterministic()?;
        let o = self.range_overlaps();
        if o.is_empty() {
            Ok(())
        } else {
            Err(SpecError::NotReversible(o))
        }
    }

    pub fn is_reversible(&self) -> bool {
        self.check_reversible().is_ok()
    }

    /// Rule-wise inverse with start and halt exchanged.
    pub fn invert(&self) -> Result<TMSpec, SpecError> {
        self.check_reversible()?;
        Ok(TMSpec {
            tapes: self.tapes,
            rules: self.rules.iter().map(Rule::inverse).collect(),
            start: self.halt.clone(),
            halt: self.start.clone(),
        })
    }

    pub fn states(&self) -> BTreeSet<State> {
        let mut s: BTreeSet<State> = self.rules.iter().flat_map(|r| [r.from.clone(), r.to.clone()]).collect();
        s.insert(self.start.clone());
        s.insert(self.halt.clone());
        s
    }

    /// Non-blank symbols read or written on `tape`.
    pub fn alphabet(&self, tape: usize) -> BTreeSet<Symbol> {
        self.rules
            .iter()
            .filter_map(|r| match &r.actions[tape] {
                Action::Rw { read, write } => Some([read.clone(), write.clone()]),
                Action::Move(_) => None,
            })
            .flatten()
            .filter(|s| &**s != BLANK)
            .collect()
    }

    /// Same rules in a canonical order, for comparisons up to reordering.
    pub fn sorted(&self) -> TMSpec {
        let mut s = self.clone();
        s.rules.sort();
        s
    }

    pub fn parse(text: &str) -> Result<TMSpec, SpecError> {
        let mut tapes = None;
        let mut start = None;
        let mut halt = None;
        let mut rules = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| SpecError::Parse { line: i + 1, msg };
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if let [key, value] = tokens[..] {
                let Some(key) = key.strip_suffix(':') else {
                    return Err(err("expected `key: value`".into()));
                };
                match key {
                    "tapes" => tapes = Some(value.parse::<usize>().map_err(|e| err(e.to_string()))?),
                    "start" => start = Some(value.to_string()),
                    "halt" => halt = Some(value.to_string()),
                    _ => return Err(err(format!("unknown directive {key:?}"))),
                }
                continue;
            }
            let [from, acts, "->", to] = tokens[..] else {
                return Err(err("expected `state act[,act...] -> state`".into()));
            };
            let actions = acts.split(',').map(|a| parse_action(a).ok_or_else(|| err(format!("bad action {a:?}"))));
            rules.push(Rule::new(from, actions.collect::<Result<_, _>>()?, to));
        }
        let tapes = tapes.or_else(|| rules.first().map(|r| r.actions.len())).unwrap_or(1);
        let at_end = text.lines().count();
        let start = start.ok_or(SpecError::Parse { line: at_end, msg: "missing `start:`".into() })?;
        let halt = halt.ok_or(SpecError::Parse { line: at_end, msg: "missing `halt:`".into() })?;
        let spec = TMSpec::new(tapes, rules, &start, &halt);
        spec.validate()?;
        Ok(spec)
    }

    /// A spec text, or `builtin:<name>` for a shipped fixture.
    pub fn load(text_or_builtin: &str) -> Result<TMSpec, SpecError> {
        match text_or_builtin.strip_prefix("builtin:") {
            Some(name) => builtin(name.trim()).ok_or_else(|| SpecError::UnknownBuiltin(name.trim().to_string())),
            None => TMSpec::parse(text_or_builtin),
        }
    }
}

fn parse_action(a: &str) -> Option<Action> {
    match a {
        "L" => Some(Action::Move(Move::L)),
        "N" => Some(Action::Move(Move::N)),
        "R" => Some(Action::Move(Move::R)),
        _ => {
            let (r, w) = a.split_once("->")?;
            (!r.is_empty() && !w.is_empty()).then(|| Action::rw(r, w))
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Rw { read, write } => write!(f, "{read}->{write}"),
            Action::Move(m) => write!(f, "{m:?}"),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.from)?;
        for (i, a) in self.actions.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, " -> {}", self.to)
    }
}

impl fmt::Display for TMSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tapes: {}", self.tapes)?;
        writeln!(f, "start: {}", self.start)?;
        writeln!(f, "halt: {}", self.halt)?;
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}
