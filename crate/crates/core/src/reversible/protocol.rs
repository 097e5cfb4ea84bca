//! Stage-by-stage reversible protocols over a shared multi-tape
//! configuration. Every stage is a separate machine that is checked
//! reversible before it runs, and the tapes are compared against the
//! expected row after it halts.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use super::build::{copy_machine, embed, history_machine, space_forward, swap_machine, CopyEnd};
use super::sim::{run_tm, Configuration, Machine, Tape, Trace};
use super::{sym, SpecError, Symbol, TMSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProtocolError {
    #[error("stage {stage} ({label}): {detail}")]
    Stage { stage: usize, label: String, detail: String },
    #[error("program precondition: {0}")]
    Precondition(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

/// A program for the protocols: a reversible single-tape machine, or a pair
/// of ordinary machines converting `x → y` and `y → x`.
#[derive(Debug, Clone)]
pub enum RevProgram {
    Reversible(TMSpec),
    Converted { forward: TMSpec, backward: TMSpec },
}

impl RevProgram {
    pub fn text(&self) -> String {
        match self {
            RevProgram::Reversible(s) => format!("reversible\n{s}"),
            RevProgram::Converted { forward, backward } => format!("converted\n{forward}---\n{backward}"),
        }
    }

    fn alphabet(&self) -> BTreeSet<Symbol> {
        let mut a: BTreeSet<Symbol> = [sym("0"), sym("1")].into_iter().collect();
        match self {
            RevProgram::Reversible(s) => a.extend(s.alphabet(0)),
            RevProgram::Converted { forward, backward } => {
                a.extend(forward.alphabet(0));
                a.extend(backward.alphabet(0));
            }
        }
        a
    }
}

/// The program text as bits, eight per byte.
pub fn code_tape(p: &RevProgram) -> Vec<Symbol> {
    let (zero, one) = (sym("0"), sym("1"));
    p.text()
        .bytes()
        .flat_map(|b| (0..8).rev().map(move |i| b >> i & 1 == 1))
        .map(|bit| if bit { one.clone() } else { zero.clone() })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct StageSummary {
    pub stage: usize,
    pub label: String,
    pub steps: usize,
    pub erasures: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RowSnapshot {
    pub row: usize,
    pub label: String,
    pub tapes: Vec<String>,
    pub heads: Vec<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProtocolReport {
    pub tape_names: Vec<&'static str>,
    pub rows: Vec<RowSnapshot>,
    pub stages: Vec<StageSummary>,
    pub erasure_count: usize,
    pub total_steps: usize,
    #[serde(skip)]
    pub last: Configuration,
}

struct Runner {
    config: Configuration,
    step_limit: u64,
    stage: usize,
    report: ProtocolReport,
}

impl Runner {
    fn new(tapes: Vec<Tape>, tape_names: Vec<&'static str>, step_limit: u64) -> Self {
        let config = Configuration { state: sym("init"), tapes };
        let report = ProtocolReport {
            tape_names,
            rows: Vec::new(),
            stages: Vec::new(),
            erasure_count: 0,
            total_steps: 0,
            last: config.clone(),
        };
        Runner { config, step_limit, stage: 0, report }
    }

    fn fail(&self, label: &str, detail: impl Into<String>) -> ProtocolError {
        ProtocolError::Stage { stage: self.stage, label: label.to_string(), detail: detail.into() }
    }

    fn run(&mut self, label: &str, spec: TMSpec) -> Result<(), ProtocolError> {
        self.stage += 1;
        spec.check_reversible().map_err(|e| self.fail(label, format!("not reversible: {e}")))?;
        let machine = Machine::new(spec);
        let mut c = self.config.clone();
        c.state = machine.spec.start.clone();
        let trace = machine.run(c, self.step_limit);
        if !trace.halted() {
            return Err(self.fail(label, format!("{:?} after {} steps", trace.status, trace.steps.len())));
        }
        self.report.stages.push(StageSummary {
            stage: self.stage,
            label: label.to_string(),
            steps: trace.steps.len(),
            erasures: trace.erasure_count,
        });
        self.report.erasure_count += trace.erasure_count;
        self.report.total_steps += trace.steps.len();
        self.config = trace.last;
        Ok(())
    }

    fn row(&mut self, label: &str, checks: &[(usize, Expect)]) -> Result<(), ProtocolError> {
        for (tape, want) in checks {
            let t = &self.config.tapes[*tape];
            if let Err(why) = want.check(t) {
                let name = self.report.tape_names[*tape];
                return Err(self.fail(label, format!("tape {name}: {why}, found {:?}@{}", t.contents(), t.head)));
            }
        }
        self.report.rows.push(RowSnapshot {
            row: self.report.rows.len(),
            label: label.to_string(),
            tapes: self.config.tapes.iter().map(Tape::contents).collect(),
            heads: self.config.tapes.iter().map(|t| t.head).collect(),
        });
        Ok(())
    }

    fn finish(mut self) -> ProtocolReport {
        self.report.last = self.config;
        self.report
    }
}

#[derive(Debug, Clone)]
enum Expect {
    /// Exactly this word from cell 0, head on cell 0.
    Word(Tape),
    /// These contents, head anywhere.
    Contents(Tape),
    Blank,
    Head(i64),
}

impl Expect {
    fn word(w: &str) -> Self {
        Expect::Word(Tape::from_word(w))
    }

    fn check(&self, t: &Tape) -> Result<(), String> {
        match self {
            Expect::Word(w) if !(t.same_contents(w) && t.head == 0) => Err(format!("expected {:?}@0", w.contents())),
            Expect::Contents(w) if !t.same_contents(w) => Err(format!("expected {:?}", w.contents())),
            Expect::Blank if !t.is_blank() => Err("expected blank".into()),
            Expect::Head(h) if t.head != *h => Err(format!("expected head at {h}")),
            _ => Ok(()),
        }
    }
}

/// Output of a single-tape machine, required to be a word on cell 0.
fn evaluate(spec: &TMSpec, x: &str, step_limit: u64) -> Result<String, ProtocolError> {
    if spec.tapes != 1 {
        return Err(ProtocolError::Precondition(format!("expected a single-tape machine, got {} tapes", spec.tapes)));
    }
    let t = run_tm(spec, x, step_limit);
    if !t.halted() {
        return Err(ProtocolError::Precondition(format!("machine does not halt on {x:?}: {:?}", t.status)));
    }
    let out = &t.last.tapes[0];
    let word = out.contents();
    if out.head != 0 || !out.same_contents(&Tape::from_word(&word)) {
        return Err(ProtocolError::Precondition(format!("output on {x:?} is not a word at cell 0")));
    }
    Ok(word)
}

fn expected(p: &RevProgram, x: &str, step_limit: u64) -> Result<String, ProtocolError> {
    match p {
        RevProgram::Reversible(s) => {
            s.check_reversible()?;
            evaluate(s, x, step_limit)
        }
        RevProgram::Converted { forward, backward } => {
            let y = evaluate(forward, x, step_limit)?;
            let back = evaluate(backward, &y, step_limit)?;
            if back != x {
                return Err(ProtocolError::Precondition(format!("backward program maps {y:?} to {back:?}, not {x:?}")));
            }
            Ok(y)
        }
    }
}

struct Layout {
    total: usize,
    w: usize,
    h: usize,
    c: usize,
}

/// The seven conversion stages. Row checks are recorded only when `rows`.
fn run_converted(
    r: &mut Runner,
    l: &Layout,
    p: (&TMSpec, &TMSpec),
    alphabet: &BTreeSet<Symbol>,
    (x, y): (&str, &str),
    rows: bool,
) -> Result<(), ProtocolError> {
    let hist_xy = embed(&history_machine(p.0)?, l.total, &[l.w, l.h]);
    let hist_yx = embed(&history_machine(p.1)?, l.total, &[l.w, l.h]);
    let copy = copy_machine(l.total, l.w, l.c, alphabet, CopyEnd::Blank);
    let swap = swap_machine(l.total, l.w, l.c, alphabet);
    let (w, h, c) = (l.w, l.h, l.c);
    let row = |r: &mut Runner, label: &str, checks: &[(usize, Expect)]| {
        if rows {
            r.row(label, checks)
        } else {
            checks.iter().try_for_each(|(t, e)| e.check(&r.config.tapes[*t]).map_err(|why| r.fail(label, why)))
        }
    };
    r.run("compute y, saving history", hist_xy.clone())?;
    row(r, "compute y, saving history", &[(w, Expect::word(y)), (c, Expect::Blank)])?;
    r.run("copy y to blank region", copy.clone())?;
    row(r, "copy y to blank region", &[(w, Expect::word(y)), (c, Expect::word(y))])?;
    r.run("undo computation of y from x", hist_xy.invert()?)?;
    row(r, "undo computation of y from x", &[(w, Expect::word(x)), (h, Expect::Blank), (c, Expect::word(y))])?;
    r.run("swap x and y", swap)?;
    row(r, "swap x and y", &[(w, Expect::word(y)), (h, Expect::Blank), (c, Expect::word(x))])?;
    r.run("compute x, saving history", hist_yx.clone())?;
    row(r, "compute x, saving history", &[(w, Expect::word(x)), (c, Expect::word(x))])?;
    r.run("cancel extra x", copy.invert()?)?;
    row(r, "cancel extra x", &[(w, Expect::word(x)), (c, Expect::Blank)])?;
    r.run("undo computation of x from y", hist_yx.invert()?)?;
    row(r, "undo computation of x from y", &[(w, Expect::word(y)), (h, Expect::Blank), (c, Expect::Blank)])
}

/// Reversible `x → y` from irreversible programs for `y` from `x` and `x`
/// from `y`. Tapes: program, work, history, copy region.
pub fn fig1_protocol(forward: &TMSpec, backward: &TMSpec, x: &str, step_limit: u64) -> Result<ProtocolReport, ProtocolError> {
    let prog = RevProgram::Converted { forward: forward.clone(), backward: backward.clone() };
    let y = expected(&prog, x, step_limit)?;
    let code = Tape::from_symbols(&code_tape(&prog));
    let tapes = vec![code.clone(), Tape::from_word(x), Tape::default(), Tape::default()];
    let mut r = Runner::new(tapes, vec!["program", "work", "history", "copy"], step_limit);
    let intact = (0, Expect::Word(code));
    r.row("initial configuration", &[intact.clone(), (1, Expect::word(x))])?;
    let l = Layout { total: 4, w: 1, h: 2, c: 3 };
    run_converted(&mut r, &l, (forward, backward), &prog.alphabet(), (x, &y), true)?;
    r.row("final", &[intact, (1, Expect::word(&y)), (2, Expect::Blank), (3, Expect::Blank)])?;
    Ok(r.finish())
}

fn execute(r: &mut Runner, l: &Layout, p: &RevProgram, (x, y): (&str, &str)) -> Result<(), ProtocolError> {
    match p {
        RevProgram::Reversible(spec) => r.run("run reversible program", embed(spec, l.total, &[l.w])),
        RevProgram::Converted { forward, backward } => {
            run_converted(r, l, (forward, backward), &p.alphabet(), (x, y), false)
        }
    }
}

/// Concatenated programs `p` (`x → y`) and `q` (`y → z`) run reversibly,
/// leaving `z` and the program head back on its first cell. Tapes:
/// program, work, history, copy region, transcript.
pub fn fig2_concat(p: &RevProgram, q: &RevProgram, x: &str, step_limit: u64) -> Result<ProtocolReport, ProtocolError> {
    let y = expected(p, x, step_limit)?;
    let z = expected(q, &y, step_limit)?;
    let dot = sym(".");
    let pcode = code_tape(p);
    let mut program = pcode.clone();
    program.push(dot.clone());
    let transcript = Tape::from_symbols(&program);
    program.extend(code_tape(q));
    program.push(dot.clone());
    let program = Tape::from_symbols(&program);
    let tapes = vec![program.clone(), Tape::from_word(x), Tape::default(), Tape::default(), Tape::default()];
    let mut r = Runner::new(tapes, vec!["program", "work", "history", "copy", "transcript"], step_limit);
    let l = Layout { total: 5, w: 1, h: 2, c: 3 };
    let (prog, tr) = (0, 4);
    let prog_alphabet: BTreeSet<Symbol> = [sym("0"), sym("1"), dot.clone()].into_iter().collect();
    let intact = (prog, Expect::Contents(program.clone()));
    r.row("initial configuration", &[intact.clone(), (prog, Expect::Head(0)), (1, Expect::word(x)), (tr, Expect::Blank)])?;

    let transcribe = copy_machine(5, prog, tr, &prog_alphabet, CopyEnd::Delimiter(dot.clone()));
    r.run("transcribe first program", transcribe.clone())?;
    execute(&mut r, &l, p, (x, &y))?;
    r.row(
        "compute (y|x), transcribing first program",
        &[intact.clone(), (1, Expect::word(&y)), (2, Expect::Blank), (3, Expect::Blank), (tr, Expect::Contents(transcript))],
    )?;

    let forward = space_forward(5, prog, tr, &prog_alphabet, &dot);
    r.run("space forward", forward.clone())?;
    r.row("space forward to start of second program", &[intact.clone(), (prog, Expect::Head(pcode.len() as i64 + 1))])?;

    execute(&mut r, &l, q, (&y, &z))?;
    r.row("compute (z|y)", &[intact.clone(), (1, Expect::word(&z)), (2, Expect::Blank), (3, Expect::Blank)])?;

    r.run("space back", forward.invert()?)?;
    r.run("cancel transcript", transcribe.invert()?)?;
    r.row(
        "cancel extra first program as head returns",
        &[intact, (prog, Expect::Head(0)), (1, Expect::word(&z)), (2, Expect::Blank), (3, Expect::Blank), (tr, Expect::Blank)],
    )?;
    Ok(r.finish())
}

/// Bits flowing in and out: auxiliary cells that had to be non-blank at the
/// start, and cells erased during the run or left behind on auxiliary tapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ErasureAudit {
    pub provided_bits: usize,
    pub erased_bits: usize,
}

pub fn erasure_audit(trace: &Trace, aux_tapes: &[usize]) -> ErasureAudit {
    let count = |c: &Configuration| aux_tapes.iter().map(|&t| c.tapes[t].non_blank()).sum::<usize>();
    ErasureAudit { provided_bits: count(&trace.initial), erased_bits: trace.erasure_count + count(&trace.last) }
}
