use super::*;

const LIMIT: u64 = 1_000_000;

fn words(max_len: usize) -> Vec<String> {
    (0..=max_len)
        .flat_map(|n| (0..1u32 << n).map(move |v| (0..n).rev().map(|i| if v >> i & 1 == 1 { '1' } else { '0' }).collect()))
        .collect()
}

fn out(trace: &Trace, tape: usize) -> (String, i64) {
    let t = &trace.last.tapes[tape];
    (t.contents(), t.head)
}

/// Fixture semantics by integer arithmetic, MSB first, mod 2^n.
fn add_mod(x: &str, delta: i64) -> String {
    let n = x.len();
    if n == 0 {
        return String::new();
    }
    let v = i64::from_str_radix(x, 2).unwrap();
    let m = 1i64 << n;
    format!("{:0n$b}", (v + delta).rem_euclid(m))
}

fn oracle(name: &str, x: &str) -> String {
    match name {
        "identity" => x.to_string(),
        "not" => x.chars().map(|c| if c == '0' { '1' } else { '0' }).collect(),
        "increment" => add_mod(x, 1),
        "decrement" => add_mod(x, -1),
        "copy" => format!("{x}|{x}"),
        _ => unreachable!(),
    }
}

#[test]
fn fixtures_match_their_oracles() {
    for name in builtin_names() {
        let spec = builtin(name).unwrap();
        assert!(spec.check_deterministic().is_ok(), "{name}");
        for x in words(8) {
            let t = run_tm(&spec, &x, LIMIT);
            assert!(t.halted(), "{name} on {x}");
            let (content, head) = out(&t, 0);
            // Leading zeros of the output are cells, so compare cell-wise.
            assert!(t.last.tapes[0].same_contents(&Tape::from_word(&oracle(name, &x))), "{name} on {x}: {content}");
            assert_eq!(head, 0);
        }
    }
}

#[test]
fn fixture_examples() {
    assert_eq!(out(&run_tm(&builtin("identity").unwrap(), "101", 10), 0), ("101".into(), 0));
    assert_eq!(out(&run_tm(&builtin("increment").unwrap(), "011", 100), 0), ("100".into(), 0));
    assert_eq!(out(&run_tm(&builtin("decrement").unwrap(), "100", 100), 0), ("011".into(), 0));
    assert_eq!(out(&run_tm(&builtin("increment").unwrap(), "111", 100), 0), ("000".into(), 0));
    assert_eq!(out(&run_tm(&builtin("copy").unwrap(), "10", 1000), 0), ("10|10".into(), 0));
    assert_eq!(out(&run_tm(&builtin("not").unwrap(), "", 100), 0), ("".into(), 0));
}

#[test]
fn fixture_reversibility_flags() {
    assert!(builtin("identity").unwrap().is_reversible());
    assert!(builtin("not").unwrap().is_reversible());
    assert!(!builtin("increment").unwrap().is_reversible());
    assert!(!builtin("copy").unwrap().is_reversible());
}

#[test]
fn step_limit_and_stuck() {
    let t = run_tm(&builtin("increment").unwrap(), "0110", 3);
    assert_eq!((t.status, t.steps.len()), (RunStatus::StepLimit, 3));
    let stuck = TMSpec::parse("start: a\nhalt: h\na 0->0 -> h").unwrap();
    assert_eq!(run_tm(&stuck, "1", 10).status, RunStatus::Stuck);
}

#[test]
fn replay_matches_run() {
    let m = Machine::new(builtin("copy").unwrap());
    let t = m.run(Configuration::with_input(&m.spec, "101"), LIMIT);
    let configs = replay(&m, &t);
    assert_eq!(configs.len(), t.steps.len() + 1);
    assert_eq!(configs.last(), Some(&t.last));
}

#[test]
fn normalize_adds_fresh_start_only_when_needed() {
    let not = builtin("not").unwrap();
    assert_eq!(normalize(&not), not);
    let inc = builtin("increment").unwrap();
    assert_eq!(normalize(&inc).rules.len(), inc.rules.len() + 1);
    let looped = TMSpec::parse("start: a\nhalt: h\na 0->1 -> a\na 1->1 -> h\nh N -> a").unwrap();
    let n = normalize(&looped);
    assert_eq!(n.start.as_ref(), "a^");
    assert_eq!(n.rules.len(), 3);
    assert!(n.rules.iter().all(|r| r.from != n.halt));
}

#[test]
fn history_machine_is_reversible() {
    for name in builtin_names() {
        let h = history_machine(&builtin(name).unwrap()).unwrap();
        assert!(h.is_reversible(), "{name}");
    }
    let nondet = TMSpec::parse("start: a\nhalt: h\na R -> h\na 0->0 -> h").unwrap();
    assert!(matches!(history_machine(&nondet), Err(SpecError::NotDeterministic(_))));
    assert!(bennett_compile(&nondet).is_err());
}

#[test]
fn copy_and_cancel() {
    let alphabet = [sym("0"), sym("1")].into_iter().collect();
    let copy = copy_machine(2, 0, 1, &alphabet, CopyEnd::Blank);
    assert!(copy.is_reversible());
    let m = Machine::new(copy.clone());
    let t = m.run(Configuration::with_input(&copy, "0110"), LIMIT);
    assert!(t.halted());
    assert_eq!(out(&t, 1), ("0110".into(), 0));
    let cancel = Machine::new(copy.invert().unwrap());
    let mut c = t.last.clone();
    c.state = cancel.spec.start.clone();
    let back = cancel.run(c.clone(), LIMIT);
    assert!(back.halted());
    assert!(back.last.tapes[1].is_blank());
    // Differing operands: the cancel gets stuck instead of erasing.
    c.tapes[1] = Tape::from_word("0111");
    assert_eq!(cancel.run(c, LIMIT).status, RunStatus::Stuck);
}

#[test]
fn swap_exchanges_words() {
    let alphabet = [sym("0"), sym("1")].into_iter().collect();
    let swap = swap_machine(2, 0, 1, &alphabet);
    assert!(swap.is_reversible());
    let mut c = Configuration::with_input(&swap, "011");
    c.tapes[1] = Tape::from_word("10");
    let t = Machine::new(swap).run(c, LIMIT);
    assert!(t.halted());
    assert_eq!((out(&t, 0), out(&t, 1)), (("10".into(), 0), ("011".into(), 0)));
}

#[test]
fn chain_composes() {
    let not = builtin("not").unwrap();
    let (twice, junctions) = chain(&[not.clone(), not.clone()]);
    assert!(twice.is_reversible());
    assert_eq!(junctions.len(), 1);
    let t = run_tm(&twice, "0110", LIMIT);
    assert_eq!(out(&t, 0), ("0110".into(), 0));
}

#[test]
fn bennett_compile_forward_and_back() {
    for name in builtin_names() {
        let spec = builtin(name).unwrap();
        let compiled = bennett_compile(&spec).unwrap();
        assert!(compiled.spec.is_reversible(), "{name}");
        let machine = Machine::new(compiled.spec.clone());
        let inverse = Machine::new(compiled.spec.invert().unwrap());
        let max_len = if name == "copy" { 6 } else { 8 };
        for x in words(max_len) {
            let t = machine.run(Configuration::with_input(&compiled.spec, &x), LIMIT);
            assert!(t.halted(), "{name} on {x}");
            assert_eq!(t.erasure_count, 0);
            assert!(t.last.tapes[0].same_contents(&Tape::from_word(&x)));
            assert!(t.last.tapes[compiled.output_tape].same_contents(&Tape::from_word(&oracle(name, &x))));
            assert!(t.last.tapes[compiled.history_tape].is_blank());
            assert!(t.last.tapes.iter().all(|tape| tape.head == 0));
            // Inverse run from the final configuration retraces every step.
            let mut start = t.last.clone();
            start.state = inverse.spec.start.clone();
            let back = inverse.run(start, LIMIT);
            assert!(back.halted());
            let mut fwd = replay(&machine, &t);
            fwd.reverse();
            assert_eq!(replay(&inverse, &back), fwd, "{name} on {x}");
        }
    }
}

#[test]
fn inverse_of_fixture_retraces() {
    let not = builtin("not").unwrap();
    let (m, inv) = (Machine::new(not.clone()), Machine::new(not.invert().unwrap()));
    let t = m.run(Configuration::with_input(&not, "1101"), LIMIT);
    let mut c = t.last.clone();
    c.state = inv.spec.start.clone();
    let back = inv.run(c, LIMIT);
    let mut fwd = replay(&m, &t);
    fwd.reverse();
    assert_eq!(replay(&inv, &back), fwd);
}

#[test]
fn erasure_audits() {
    let not = builtin("not").unwrap();
    assert_eq!(
        erasure_audit(&run_tm(&not, "0101", LIMIT), &[]),
        ErasureAudit { provided_bits: 0, erased_bits: 0 }
    );
    let blanker = TMSpec::parse("start: s\nhalt: h\ns 0->_ -> m\ns 1->_ -> m\nm R -> s\ns _->_ -> h").unwrap();
    for n in 0..6 {
        let x = "10".repeat(n);
        let a = erasure_audit(&run_tm(&blanker, &x, LIMIT), &[]);
        assert_eq!(a, ErasureAudit { provided_bits: 0, erased_bits: 2 * n });
    }
    // Stopping a compiled run where uncomputing would begin leaves one
    // history record per original step.
    let inc = builtin("increment").unwrap();
    let compiled = bennett_compile(&inc).unwrap();
    let m = Machine::new(compiled.spec.clone());
    for x in ["", "0", "011", "1111"] {
        let t = m.run_until(Configuration::with_input(&compiled.spec, x), LIMIT, |s| *s == compiled.uncompute_start);
        let a = erasure_audit(&t, &[compiled.history_tape]);
        assert_eq!(a.provided_bits, 0);
        assert_eq!(a.erased_bits, run_tm(&normalize(&inc), x, LIMIT).steps.len());
        let full = m.run(Configuration::with_input(&compiled.spec, x), LIMIT);
        assert_eq!(erasure_audit(&full, &[compiled.history_tape]), ErasureAudit { provided_bits: 0, erased_bits: 0 });
    }
}

fn final_row(report: &ProtocolReport) -> &RowSnapshot {
    report.rows.last().unwrap()
}

#[test]
fn fig1_identity_and_counter() {
    let id = builtin("identity").unwrap();
    let r = fig1_protocol(&id, &id, "0110", LIMIT).unwrap();
    assert_eq!(r.rows.len(), 9);
    assert_eq!(final_row(&r).tapes[1..], ["0110".to_string(), String::new(), String::new()]);
    assert_eq!(r.erasure_count, 0);

    let (inc, dec) = (builtin("increment").unwrap(), builtin("decrement").unwrap());
    let r = fig1_protocol(&inc, &dec, "011", LIMIT).unwrap();
    let last = final_row(&r);
    assert_eq!(last.tapes[1..], ["100".to_string(), String::new(), String::new()]);
    assert_eq!(last.tapes[0], r.rows[0].tapes[0]);
    assert_eq!(r.erasure_count, 0);
    assert_eq!(r.stages.len(), 7);
    // Rows after stages 3 and 4 hold x and y only.
    assert_eq!(r.rows[3].tapes[1..], ["011".to_string(), String::new(), "100".to_string()]);
    assert_eq!(r.rows[4].tapes[1..], ["100".to_string(), String::new(), "011".to_string()]);
}

#[test]
fn fig1_rejects_inconsistent_programs() {
    let (inc, not) = (builtin("increment").unwrap(), builtin("not").unwrap());
    assert!(matches!(fig1_protocol(&inc, &not, "001", LIMIT), Err(ProtocolError::Precondition(_))));
}

#[test]
fn fig2_concatenation() {
    let id = RevProgram::Reversible(builtin("identity").unwrap());
    let r = fig2_concat(&id, &id, "101", LIMIT).unwrap();
    assert_eq!(final_row(&r).tapes[1], "101");

    let inc = RevProgram::Converted { forward: builtin("increment").unwrap(), backward: builtin("decrement").unwrap() };
    let r = fig2_concat(&inc, &inc, "001", LIMIT).unwrap();
    let last = final_row(&r);
    assert_eq!(last.tapes[1..], ["011".to_string(), String::new(), String::new(), String::new()]);
    assert_eq!(last.heads[0], 0);
    assert_eq!(last.tapes[0], r.rows[0].tapes[0]);
    assert_eq!(r.erasure_count, 0);
    assert_eq!(r.rows.len(), 5);

    let not = RevProgram::Reversible(builtin("not").unwrap());
    let r = fig2_concat(&not, &inc, "001", LIMIT).unwrap();
    assert_eq!(final_row(&r).tapes[1], "111");
}

#[test]
fn fig2_rejects_irreversible_program() {
    let inc = RevProgram::Reversible(builtin("increment").unwrap());
    assert!(fig2_concat(&inc, &inc, "001", LIMIT).is_err());
}
