use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use super::{sym, Action, State, Symbol, TMSpec, BLANK};

/// Sparse tape: only non-blank cells are stored, so equal contents compare
/// equal regardless of history.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Tape {
    cells: BTreeMap<i64, Symbol>,
    pub head: i64,
}

impl Tape {
    /// One symbol per character, starting at cell 0 under the head.
    pub fn from_word(word: &str) -> Tape {
        let symbols: Vec<Symbol> = word.chars().map(|c| sym(c.encode_utf8(&mut [0; 4]))).collect();
        Tape::from_symbols(&symbols)
    }

    pub fn from_symbols(symbols: &[Symbol]) -> Tape {
        let mut t = Tape::default();
        for (i, s) in symbols.iter().enumerate() {
            t.write(i as i64, s.clone());
        }
        t
    }

    pub fn read(&self, pos: i64) -> Symbol {
        self.cells.get(&pos).cloned().unwrap_or_else(|| sym(BLANK))
    }

    pub fn write(&mut self, pos: i64, s: Symbol) {
        if &*s == BLANK {
            self.cells.remove(&pos);
        } else {
            self.cells.insert(pos, s);
        }
    }

    pub fn is_blank(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn non_blank(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> impl Iterator<Item = (i64, &Symbol)> {
        self.cells.iter().map(|(&p, s)| (p, s))
    }

    /// Same cells, ignoring where the head is.
    pub fn same_contents(&self, other: &Tape) -> bool {
        self.cells == other.cells
    }

    /// The cells from the leftmost to the rightmost non-blank, blanks shown
    /// as `_`, symbols concatenated.
    pub fn contents(&self) -> String {
        let (Some((&lo, _)), Some((&hi, _))) = (self.cells.first_key_value(), self.cells.last_key_value()) else {
            return String::new();
        };
        (lo..=hi).map(|p| self.read(p).to_string()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub state: State,
    pub tapes: Vec<Tape>,
}

impl Configuration {
    pub fn blank(state: State, tapes: usize) -> Self {
        Configuration { state, tapes: vec![Tape::default(); tapes] }
    }

    /// `input` on tape 0, other tapes blank, every head on cell 0.
    pub fn with_input(spec: &TMSpec, input: &str) -> Self {
        let mut c = Configuration::blank(spec.start.clone(), spec.tapes);
        if let Some(t) = c.tapes.first_mut() {
            *t = Tape::from_word(input);
        }
        c
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.state)?;
        for (i, t) in self.tapes.iter().enumerate() {
            write!(f, " t{i}@{}:{}", t.head, t.contents())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Halted,
    StepLimit,
    /// No rule applies in a non-halting state.
    Stuck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub rule: usize,
    /// Cells this step turned from non-blank to blank with a lossy rule.
    pub erased: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub initial: Configuration,
    pub steps: Vec<Step>,
    pub last: Configuration,
    pub status: RunStatus,
    pub erasure_count: usize,
}

impl Trace {
    pub fn halted(&self) -> bool {
        self.status == RunStatus::Halted
    }
}

/// A spec with its rules indexed by state and its lossy rules marked.
#[derive(Debug, Clone)]
pub struct Machine {
    pub spec: TMSpec,
    by_state: HashMap<State, Vec<usize>>,
    lossy: Vec<bool>,
}

impl Machine {
    pub fn new(spec: TMSpec) -> Self {
        let mut by_state: HashMap<State, Vec<usize>> = HashMap::new();
        for (i, r) in spec.rules.iter().enumerate() {
            by_state.entry(r.from.clone()).or_default().push(i);
        }
        let mut lossy = vec![false; spec.rules.len()];
        for (i, j) in spec.range_overlaps() {
            lossy[i] = true;
            lossy[j] = true;
        }
        Machine { spec, by_state, lossy }
    }

    fn applies(&self, rule: usize, c: &Configuration) -> bool {
        self.spec.rules[rule].actions.iter().zip(&c.tapes).all(|(a, t)| match a {
            Action::Rw { read, .. } => t.read(t.head) == *read,
            Action::Move(_) => true,
        })
    }

    /// The first applicable rule; unique when the spec is deterministic.
    pub fn pick(&self, c: &Configuration) -> Option<usize> {
        self.by_state.get(&c.state)?.iter().copied().find(|&i| self.applies(i, c))
    }

    pub fn apply(&self, rule: usize, c: &mut Configuration) -> usize {
        let r = &self.spec.rules[rule];
        let mut erased = 0;
        for (a, t) in r.actions.iter().zip(c.tapes.iter_mut()) {
            match a {
                Action::Rw { write, .. } => {
                    if self.lossy[rule] && &**write == BLANK && &*t.read(t.head) != BLANK {
                        erased += 1;
                    }
                    t.write(t.head, write.clone());
                }
                Action::Move(m) => t.head += m.delta(),
            }
        }
        c.state = r.to.clone();
        erased
    }

    pub fn run(&self, c: Configuration, step_limit: u64) -> Trace {
        self.run_until(c, step_limit, |_| false)
    }

    /// Runs until the halt state, a step limit, no applicable rule, or a
    /// state accepted by `stop` (reported as [`RunStatus::Halted`]).
    pub fn run_until(&self, c: Configuration, step_limit: u64, stop: impl Fn(&State) -> bool) -> Trace {
        let initial = c.clone();
        let mut c = c;
        let mut steps = Vec::new();
        let mut erasure_count = 0;
        let status = loop {
            if c.state == self.spec.halt || stop(&c.state) {
                break RunStatus::Halted;
            }
            if steps.len() as u64 >= step_limit {
                break RunStatus::StepLimit;
            }
            let Some(rule) = self.pick(&c) else { break RunStatus::Stuck };
            let erased = self.apply(rule, &mut c);
            erasure_count += erased;
            steps.push(Step { rule, erased });
        };
        Trace { initial, steps, last: c, status, erasure_count }
    }
}

/// `input` on tape 0 with every head on cell 0.
pub fn run_tm(spec: &TMSpec, input: &str, step_limit: u64) -> Trace {
    Machine::new(spec.clone()).run(Configuration::with_input(spec, input), step_limit)
}

/// Every configuration of the trace, initial first.
pub fn replay(machine: &Machine, trace: &Trace) -> Vec<Configuration> {
    let mut c = trace.initial.clone();
    let mut out = Vec::with_capacity(trace.steps.len() + 1);
    out.push(c.clone());
    for s in &trace.steps {
        machine.apply(s.rule, &mut c);
        out.push(c.clone());
    }
    out
}
