//! TPM-1: a tiny self-delimiting machine with exactly enumerable semantics.
//!
//! Opcodes are read left to right from the program:
//!
//! | bits        | op      | effect                                            |
//! |-------------|---------|---------------------------------------------------|
//! | `00`        | EMIT0   | append `0`                                        |
//! | `01`        | EMIT1   | append `1`                                        |
//! | `100`       | COPY    | append the next unread condition bit              |
//! | `101`       | SKIP    | advance the condition cursor                      |
//! | `110 1^k 0` | REP(k)  | output becomes `k + 1` copies of itself (`k ≥ 1`) |
//! | `111`       | HALT    | stop                                              |
//!
//! A program halts only if HALT is reached with every program bit consumed,
//! so the halting programs for a fixed condition form a prefix-free set.

use serde::Serialize;

use crate::codes::BitString;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExecBudget {
    pub max_steps: u64,
    pub max_output_bits: usize,
}

impl ExecBudget {
    pub fn new(max_steps: u64, max_output_bits: usize) -> Self {
        assert!(max_steps > 0 && max_output_bits > 0, "budgets must be positive");
        Self { max_steps, max_output_bits }
    }
}

impl Default for ExecBudget {
    fn default() -> Self {
        Self { max_steps: 4096, max_output_bits: 4096 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UndefinedReason {
    MidCodeword,
    TrailingBits,
    InputExhausted,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Halted(BitString),
    Undefined(UndefinedReason),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: Status,
    pub steps_used: u64,
    pub input_bits_read: usize,
}

impl Outcome {
    pub fn output(&self) -> Option<&BitString> {
        match &self.status {
            Status::Halted(y) => Some(y),
            Status::Undefined(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Emit(bool),
    Copy,
    Skip,
    Rep(usize),
    Halt,
}

impl Op {
    pub fn encode(self) -> BitString {
        let text = match self {
            Op::Emit(false) => "00".to_string(),
            Op::Emit(true) => "01".to_string(),
            Op::Copy => "100".to_string(),
            Op::Skip => "101".to_string(),
            Op::Rep(k) => format!("110{}0", "1".repeat(k)),
            Op::Halt => "111".to_string(),
        };
        BitString::lit(&text)
    }

    pub fn width(self) -> usize {
        match self {
            Op::Emit(_) => 2,
            Op::Copy | Op::Skip | Op::Halt => 3,
            Op::Rep(k) => 4 + k,
        }
    }
}

/// Decodes the opcode starting at `pos`. `None` means the program ends
/// mid-codeword (including `1100`, which would be REP(0) and is not an opcode).
pub fn decode_op(bits: &[bool], pos: usize) -> Option<Op> {
    let at = |i: usize| bits.get(pos + i).copied();
    match (at(0)?, at(1)?) {
        (false, b) => Some(Op::Emit(b)),
        (true, false) => Some(if at(2)? { Op::Skip } else { Op::Copy }),
        (true, true) => {
            if at(2)? {
                return Some(Op::Halt);
            }
            let mut k = 0;
            while at(3 + k)? {
                k += 1;
            }
            (k >= 1).then_some(Op::Rep(k))
        }
    }
}

/// Mutable execution state shared by [`run`] and the enumerator.
#[derive(Debug, Clone, Default)]
struct Exec {
    output: Vec<bool>,
    cursor: usize,
    steps: u64,
}

impl Exec {
    fn apply(&mut self, op: Op, cond: &[bool], budget: &ExecBudget) -> Result<(), UndefinedReason> {
        if self.steps >= budget.max_steps {
            return Err(UndefinedReason::BudgetExceeded);
        }
        self.steps += 1;
        match op {
            Op::Emit(b) => self.emit(b, budget),
            Op::Copy => {
                let b = *cond.get(self.cursor).ok_or(UndefinedReason::InputExhausted)?;
                self.cursor += 1;
                self.emit(b, budget)
            }
            Op::Skip => {
                if self.cursor >= cond.len() {
                    return Err(UndefinedReason::InputExhausted);
                }
                self.cursor += 1;
                Ok(())
            }
            Op::Rep(k) => {
                let len = self.output.len();
                let new_len = len.checked_mul(k + 1).ok_or(UndefinedReason::BudgetExceeded)?;
                if new_len > budget.max_output_bits {
                    return Err(UndefinedReason::BudgetExceeded);
                }
                for _ in 0..k {
                    self.output.extend_from_within(..len);
                }
                Ok(())
            }
            Op::Halt => Ok(()),
        }
    }

    fn emit(&mut self, b: bool, budget: &ExecBudget) -> Result<(), UndefinedReason> {
        if self.output.len() >= budget.max_output_bits {
            return Err(UndefinedReason::BudgetExceeded);
        }
        self.output.push(b);
        Ok(())
    }
}

/// Runs program `p` on condition `x`.
pub fn run(p: &BitString, x: &BitString, budget: &ExecBudget) -> Outcome {
    let bits = p.bits();
    let mut exec = Exec::default();
    let mut pos = 0;
    let status = loop {
        let Some(op) = decode_op(bits, pos) else {
            break Status::Undefined(UndefinedReason::MidCodeword);
        };
        if let Err(reason) = exec.apply(op, x.bits(), budget) {
            break Status::Undefined(reason);
        }
        pos += op.width();
        if op == Op::Halt {
            break if pos == bits.len() {
                Status::Halted(BitString::from_bits(std::mem::take(&mut exec.output)))
            } else {
                Status::Undefined(UndefinedReason::TrailingBits)
            };
        }
    };
    Outcome { status, steps_used: exec.steps, input_bits_read: exec.cursor }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HaltingProgram {
    pub program: BitString,
    pub output: BitString,
    pub steps: u64,
}

/// Every program of length `≤ max_len` that halts on `x` within budget, in
/// (length, lexicographic) order. Only valid codeword sequences are walked;
/// prefixes that fail (input exhausted, budget) are pruned with their subtree.
pub fn enumerate_halting(x: &BitString, max_len: usize, budget: &ExecBudget) -> Vec<HaltingProgram> {
    let mut out = Vec::new();
    for_each_halting(x, max_len, budget, |p, y, steps| {
        out.push(HaltingProgram { program: p.clone(), output: y.clone(), steps })
    });
    out.sort_by(|a, b| a.program.cmp(&b.program));
    out
}

/// Visits halting programs in depth-first (plain lexicographic) order.
pub fn for_each_halting<F>(x: &BitString, max_len: usize, budget: &ExecBudget, mut visit: F)
where
    F: FnMut(&BitString, &BitString, u64),
{
    let mut prefix = Vec::with_capacity(max_len);
    walk(x.bits(), max_len, budget, &mut prefix, Exec::default(), &mut visit);
}

fn walk<F>(cond: &[bool], max_len: usize, budget: &ExecBudget, prefix: &mut Vec<bool>, exec: Exec, visit: &mut F)
where
    F: FnMut(&BitString, &BitString, u64),
{
    let room = max_len.saturating_sub(prefix.len());
    // Every continuation must end in a 3-bit HALT.
    let mut ops = vec![Op::Emit(false), Op::Emit(true), Op::Copy, Op::Skip];
    ops.extend((1..).map(Op::Rep).take_while(|op| op.width() + 3 <= room));
    for op in ops {
        if op.width() + 3 > room {
            continue;
        }
        let mut next = exec.clone();
        if next.apply(op, cond, budget).is_err() {
            continue;
        }
        let mark = prefix.len();
        prefix.extend_from_slice(op.encode().bits());
        walk(cond, max_len, budget, prefix, next, visit);
        prefix.truncate(mark);
    }
    if room >= 3 && exec.steps < budget.max_steps {
        let mark = prefix.len();
        prefix.extend_from_slice(&[true, true, true]);
        visit(&BitString::from_bits(prefix.clone()), &BitString::from_bits(exec.output), exec.steps + 1);
        prefix.truncate(mark);
    }
}
