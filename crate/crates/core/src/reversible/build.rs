//! Machine constructions: history recording, copying, swapping, lockstep
//! spacing, sequential composition and the compute–copy–uncompute compile.

use std::collections::BTreeSet;

use super::{sym, Action, Move, Rule, SpecError, State, Symbol, TMSpec, BLANK};

fn fresh(taken: &BTreeSet<State>, base: &str) -> String {
    let mut name = base.to_string();
    while taken.contains(name.as_str()) {
        name.push('\'');
    }
    name
}

/// `tapes` actions, all `N` except those given.
fn acts(tapes: usize, given: &[(usize, Action)]) -> Vec<Action> {
    let mut v = vec![Action::Move(Move::N); tapes];
    for (i, a) in given {
        v[*i] = a.clone();
    }
    v
}

fn rw(read: &Symbol, write: &Symbol) -> Action {
    Action::Rw { read: read.clone(), write: write.clone() }
}

/// Drops rules leaving the halt state and, if the start state can be
/// re-entered, prepends a fresh start with a single do-nothing step.
pub fn normalize(spec: &TMSpec) -> TMSpec {
    let mut out = spec.clone();
    out.rules.retain(|r| r.from != spec.halt);
    if out.rules.iter().any(|r| r.to == out.start) {
        let start = fresh(&out.states(), &format!("{}^", out.start));
        out.rules.insert(0, Rule { from: sym(&start), actions: acts(out.tapes, &[]), to: out.start.clone() });
        out.start = sym(&start);
    }
    out
}

/// Adds a history tape (last) and splits every rule `m` in two: do the
/// original step while moving the history head right, then write the
/// record `r<m>` there. Reversible for any deterministic input.
pub fn history_machine(spec: &TMSpec) -> Result<TMSpec, SpecError> {
    spec.check_deterministic()?;
    let spec = normalize(spec);
    let k = spec.tapes;
    let width = spec.rules.len().saturating_sub(1).to_string().len();
    let mut taken = spec.states();
    let blank = sym(BLANK);
    let mut rules = Vec::with_capacity(2 * spec.rules.len());
    for (m, r) in spec.rules.iter().enumerate() {
        let mid = sym(&fresh(&taken, &format!("{}~{m}", r.from)));
        taken.insert(mid.clone());
        let mut first = r.actions.clone();
        first.push(Action::Move(Move::R));
        rules.push(Rule { from: r.from.clone(), actions: first, to: mid.clone() });
        let record = sym(&format!("r{m:0width$}"));
        rules.push(Rule { from: mid, actions: acts(k + 1, &[(k, rw(&blank, &record))]), to: r.to.clone() });
    }
    Ok(TMSpec { tapes: k + 1, rules, start: spec.start, halt: spec.halt })
}

/// Places `spec`'s tape `i` at `map[i]` of a `total`-tape machine; the other
/// tapes stay put.
pub fn embed(spec: &TMSpec, total: usize, map: &[usize]) -> TMSpec {
    assert_eq!(map.len(), spec.tapes, "one target per tape");
    let rules = spec
        .rules
        .iter()
        .map(|r| {
            let given: Vec<_> = map.iter().copied().zip(r.actions.iter().cloned()).collect();
            Rule { from: r.from.clone(), actions: acts(total, &given), to: r.to.clone() }
        })
        .collect();
    TMSpec { tapes: total, rules, start: spec.start.clone(), halt: spec.halt.clone() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CopyEnd {
    /// Copy up to the first blank.
    Blank,
    /// Copy up to and including this delimiter.
    Delimiter(Symbol),
}

/// Copies the word under the `src` head onto blank cells of `dst`, then
/// returns both heads. The cells left of both heads must be blank. The
/// inverse cancels the copy and gets stuck unless the two words agree.
pub fn copy_machine(tapes: usize, src: usize, dst: usize, alphabet: &BTreeSet<Symbol>, end: CopyEnd) -> TMSpec {
    let blank = sym(BLANK);
    let both = |m: Move| acts(tapes, &[(src, Action::Move(m)), (dst, Action::Move(m))]);
    let pair = |a: &Symbol, b: &Symbol, c: &Symbol, d: &Symbol| acts(tapes, &[(src, rw(a, c)), (dst, rw(b, d))]);
    let regular: Vec<&Symbol> = alphabet
        .iter()
        .filter(|s| &***s != BLANK && !matches!(&end, CopyEnd::Delimiter(d) if d == *s))
        .collect();
    let mut rules = vec![
        Rule::new("c0", both(Move::L), "ce"),
        Rule::new("ce", pair(&blank, &blank, &blank, &blank), "cw"),
        Rule::new("cw", both(Move::R), "cs"),
        Rule::new("cz", both(Move::L), "cy"),
        Rule::new("cy", pair(&blank, &blank, &blank, &blank), "cd"),
        Rule::new("cd", both(Move::R), "ch"),
    ];
    for a in &regular {
        rules.push(Rule::new("cs", pair(a, &blank, a, a), "cw"));
        rules.push(Rule::new("cy", pair(a, a, a, a), "cz"));
    }
    let stop = match &end {
        CopyEnd::Blank => pair(&blank, &blank, &blank, &blank),
        CopyEnd::Delimiter(d) => pair(d, &blank, d, d),
    };
    rules.push(Rule::new("cs", stop, "cz"));
    TMSpec::new(tapes, rules, "c0", "ch")
}

/// Exchanges the words under the heads of tapes `a` and `b`, up to the first
/// cell blank on both, then returns the heads.
pub fn swap_machine(tapes: usize, a: usize, b: usize, alphabet: &BTreeSet<Symbol>) -> TMSpec {
    let blank = sym(BLANK);
    let both = |m: Move| acts(tapes, &[(a, Action::Move(m)), (b, Action::Move(m))]);
    let pair = |p: &Symbol, q: &Symbol, r: &Symbol, s: &Symbol| acts(tapes, &[(a, rw(p, r)), (b, rw(q, s))]);
    let mut symbols: Vec<Symbol> = alphabet.iter().filter(|s| &***s != BLANK).cloned().collect();
    symbols.push(blank.clone());
    let mut rules = vec![
        Rule::new("w0", both(Move::L), "we"),
        Rule::new("we", pair(&blank, &blank, &blank, &blank), "ww"),
        Rule::new("ww", both(Move::R), "ws"),
        Rule::new("ws", pair(&blank, &blank, &blank, &blank), "wz"),
        Rule::new("wz", both(Move::L), "wy"),
        Rule::new("wy", pair(&blank, &blank, &blank, &blank), "wd"),
        Rule::new("wd", both(Move::R), "wh"),
    ];
    for p in &symbols {
        for q in &symbols {
            if &**p == BLANK && &**q == BLANK {
                continue;
            }
            rules.push(Rule::new("ws", pair(p, q, q, p), "ww"));
            rules.push(Rule::new("wy", pair(p, q, p, q), "wz"));
        }
    }
    TMSpec::new(tapes, rules, "w0", "wh")
}

/// Walks the heads of `prog` and its transcript `copy` right in lockstep
/// over the transcribed word, stopping with the `prog` head just past the
/// delimiter. The transcript is what makes the walk retraceable.
pub fn space_forward(tapes: usize, prog: usize, copy: usize, alphabet: &BTreeSet<Symbol>, delim: &Symbol) -> TMSpec {
    let blank = sym(BLANK);
    let both = |m: Move| acts(tapes, &[(prog, Action::Move(m)), (copy, Action::Move(m))]);
    let same = |s: &Symbol| acts(tapes, &[(prog, rw(s, s)), (copy, rw(s, s))]);
    let mut rules = vec![
        Rule::new("f0", both(Move::L), "fe"),
        Rule::new("fe", same(&blank), "fw"),
        Rule::new("fw", both(Move::R), "fs"),
        Rule::new("fs", same(delim), "fd"),
        Rule::new("fd", acts(tapes, &[(prog, Action::Move(Move::R))]), "fh"),
    ];
    for s in alphabet.iter().filter(|s| &***s != BLANK && *s != delim) {
        rules.push(Rule::new("fs", same(s), "fw"));
    }
    TMSpec::new(tapes, rules, "f0", "fh")
}

/// Runs the machines one after another: each halt state is identified with
/// the next start state. Returns the composite and the state at which each
/// later machine begins.
pub fn chain(specs: &[TMSpec]) -> (TMSpec, Vec<State>) {
    assert!(!specs.is_empty(), "nothing to chain");
    let tapes = specs[0].tapes;
    assert!(specs.iter().all(|s| s.tapes == tapes), "tape counts differ");
    let n = specs.len();
    let begin = |i: usize| sym(&format!("{i}:{}", specs[i].start));
    let mut rules = Vec::new();
    for (i, s) in specs.iter().enumerate() {
        let rename = |q: &State| {
            if *q == s.halt && i + 1 < n {
                begin(i + 1)
            } else {
                sym(&format!("{i}:{q}"))
            }
        };
        for r in &s.rules {
            rules.push(Rule { from: rename(&r.from), actions: r.actions.clone(), to: rename(&r.to) });
        }
    }
    let spec = TMSpec { tapes, rules, start: begin(0), halt: sym(&format!("{}:{}", n - 1, specs[n - 1].halt)) };
    (spec, (1..n).map(begin).collect())
}

/// A compiled reversible machine and the states where its copy and
/// uncompute phases begin.
#[derive(Debug, Clone)]
pub struct Compiled {
    pub spec: TMSpec,
    pub copy_start: State,
    pub uncompute_start: State,
    pub history_tape: usize,
    pub output_tape: usize,
}

/// Compute with a history tape, copy tape 0 to a fresh output tape, and run
/// the history machine backwards. From `x` on tape 0 the result holds `x`
/// on tape 0, `f(x)` on the output tape and a blank history tape.
pub fn bennett_compile(spec: &TMSpec) -> Result<Compiled, SpecError> {
    let history = history_machine(spec)?;
    let k = spec.tapes;
    let total = k + 2;
    let forward = embed(&history, total, &(0..=k).collect::<Vec<_>>());
    let mut alphabet = spec.alphabet(0);
    alphabet.extend([sym("0"), sym("1")]);
    let copy = copy_machine(total, 0, k + 1, &alphabet, CopyEnd::Blank);
    let backward = forward.invert()?;
    let (spec, junctions) = chain(&[forward, copy, backward]);
    Ok(Compiled {
        spec,
        copy_start: junctions[0].clone(),
        uncompute_start: junctions[1].clone(),
        history_tape: k,
        output_tape: k + 1,
    })
}
