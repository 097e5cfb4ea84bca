//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Every check recomputes its quantity by brute force from
//! raw table lookups or machine runs rather than trusting the report types.

use std::collections::{BTreeSet, HashMap};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use infodist::codes::{index_to_string, BitString};
use infodist::coloring::{randomized_b_coloring, sw_decode, sw_label, SetSystem};
use infodist::complexity::{check_admissible, e0, ComplexityTable};
use infodist::conversion::{build, decode_from_node, decode_with_d, enumerate_pairs};
use infodist::density::{ball_b1, ball_b3};
use infodist::machine::{enumerate_halting, run, ExecBudget};
use infodist::ncd::{average_linkage, distance_matrix, fixture_corpus, Builtin};
use infodist::reversible::{
    bennett_compile, builtin, builtin_names, fig1_protocol, fig2_concat, replay, Configuration, Machine, RevProgram,
    Tape,
};

// Runtime ceilings.
const KRAFT_LIMIT: Duration = Duration::from_secs(60);
const CODEC_LIMIT: Duration = Duration::from_secs(120);
const NCD_LIMIT: Duration = Duration::from_secs(10);

// Frozen from the first exhaustive run; any change is a regression.
/// Smallest `c` with `E1(x,z) ≤ E1(x,y) + E1(y,z) + c` over `{0,1}^{≤4}`
/// (table bound 14). Negative: the triangle holds with room to spare.
const TRIANGLE_C: i64 = -3;
/// Largest spread of `log2 #B1(d,x) − (d − K(d|x))` over `d ≤ 14` per
/// center `x ∈ {0,1}^{≤5}` (table bound 16).
const B1_SPREAD: f64 = 3.630766190334281;
/// Sum over centers `x ∈ {0,1}^{≤5}` of `#B1(d,x)`, `d = 0..=14`.
const B1_TOTALS: [usize; 15] = [0, 0, 0, 0, 0, 6, 6, 42, 42, 210, 210, 930, 930, 3906, 3906];

// Tolerances.
const FLOAT_EPS: f64 = 1e-9;
const SLOPE_BAND: (f64, f64) = (0.3, 0.7);
const NCD_DIAGONAL: f64 = 0.1;
const NCD_SYMMETRY: f64 = 0.05;

const RUN_LIMIT: u64 = 1_000_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn words(max_len: usize) -> Vec<BitString> {
    BitString::all_up_to(max_len).collect()
}

fn budget() -> ExecBudget {
    ExecBudget::default()
}

fn prefix_free_and_kraft() -> Outcome {
    let start = Instant::now();
    let max_len = 18;
    let halting = enumerate_halting(&BitString::empty(), max_len, &budget());
    // In plain lexicographic order a prefix sorts right before the strings
    // it prefixes, so adjacent pairs are enough.
    let mut programs: Vec<&[bool]> = halting.iter().map(|h| h.program.bits()).collect();
    programs.sort();
    let violations = programs.windows(2).filter(|w| w[1].starts_with(w[0])).count();
    // Σ 2^{-l} as an exact fraction over 2^18.
    let numerator: BigUint = halting.iter().map(|h| BigUint::one() << (max_len - h.program.len())).sum();
    let denominator = BigUint::one() << max_len;
    let library: BigRational = infodist::scalar::kraft_sum(halting.iter().map(|h| h.program.len()));
    let exact = BigRational::new(numerator.clone().into(), denominator.clone().into());
    let elapsed = start.elapsed();
    outcome(
        violations == 0 && numerator <= denominator && library == exact && elapsed <= KRAFT_LIMIT,
        format!(
            "{} halting programs ≤ {max_len} bits, {violations} prefix violations, Kraft sum {} ≈ {:.6}, {:.1?}",
            halting.len(),
            exact,
            infodist::scalar::Weight::approx(&exact),
            elapsed
        ),
    )
}

fn e0_dominates_e1() -> Outcome {
    let t = ComplexityTable::build_up_to(3, 14, budget());
    let u = words(3);
    let (mut found, mut violations, mut bad_witness) = (0, 0, 0);
    for x in &u {
        for y in &u {
            let Some(entry) = e0(x, y, 14, &budget()) else { continue };
            found += 1;
            let both = run(&entry.witness, x, &budget()).output() == Some(y)
                && run(&entry.witness, y, &budget()).output() == Some(x);
            bad_witness += usize::from(!both);
            let e1 = t.k(y, x).unwrap().max(t.k(x, y).unwrap());
            violations += usize::from(entry.k < e1);
        }
    }
    outcome(
        violations == 0 && bad_witness == 0,
        format!("{found} of {} pairs have E0 within 14 bits, {violations} with E0 < E1, {bad_witness} bad witnesses", u.len() * u.len()),
    )
}

fn metric_axioms() -> Outcome {
    let t = ComplexityTable::build_up_to(4, 14, budget());
    let u = words(4);
    let e1: HashMap<(&BitString, &BitString), usize> = u
        .iter()
        .flat_map(|x| u.iter().map(move |y| (x, y)))
        .map(|(x, y)| ((x, y), t.k(x, y).unwrap().max(t.k(y, x).unwrap())))
        .collect();
    let asym = u.iter().flat_map(|x| u.iter().map(move |y| (x, y))).filter(|&(x, y)| e1[&(x, y)] != e1[&(y, x)]).count();
    let mut c = i64::MIN;
    for x in &u {
        for y in &u {
            for z in &u {
                c = c.max(e1[&(x, z)] as i64 - e1[&(x, y)] as i64 - e1[&(y, z)] as i64);
            }
        }
    }
    let over: Vec<&BitString> = u
        .iter()
        .filter(|x| {
            let s: BigRational = u
                .iter()
                .filter(|y| y != x)
                .map(|y| BigRational::new(1.into(), BigUint::from(2u8).pow(e1[&(*x, y)] as u32).into()))
                .sum();
            s > BigRational::one()
        })
        .collect();
    let report = check_admissible(&t, &u);
    outcome(
        asym == 0 && c == TRIANGLE_C && report.triangle_c == Some(c) && over.is_empty() && report.normalization_ok,
        format!(
            "{asym} asymmetric pairs, triangle c = {c} (frozen {TRIANGLE_C}), {} centers with normalization > 1, max {:.6}",
            over.len(),
            report.max_normalization
        ),
    )
}

fn conversion_codec() -> Outcome {
    let start = Instant::now();
    let t = ComplexityTable::build_up_to(3, 12, budget());
    let (mut pairs, mut failures, mut overflow, mut errors) = (0, 0, 0, Vec::new());
    for k1 in 4..=9 {
        for k2 in k1..=9 {
            let rel = enumerate_pairs(&t, k1, k2).unwrap();
            let g = match build(&t, k1, k2) {
                Ok(g) => g,
                Err(e) => {
                    errors.push(format!("({k1},{k2}): {e}"));
                    continue;
                }
            };
            // Every related pair must be an edge, and decode from all sides.
            let mut seen = BTreeSet::new();
            for e in &g.edges {
                let x = e.xd.slice(0, e.xd.len() - e.d.len());
                seen.insert((x.clone(), e.y.clone()));
                let ok = decode_from_node(&g, e.color, &e.xd).as_ref() == Ok(&e.y)
                    && decode_from_node(&g, e.color, &e.y).as_ref() == Ok(&e.xd)
                    && decode_with_d(&g, e.color, &e.d, &x).as_ref() == Ok(&e.y)
                    && decode_with_d(&g, e.color, &e.d, &e.y).as_ref() == Ok(&x);
                failures += usize::from(!ok);
                overflow += usize::from(e.color >= 1 << (k1 + 3));
            }
            failures += rel.pairs.iter().filter(|p| !seen.contains(&(p.x.clone(), p.y.clone()))).count();
            pairs += rel.pairs.len();
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures == 0 && overflow == 0 && errors.is_empty() && elapsed <= CODEC_LIMIT,
        format!("{pairs} pairs over 21 (k1,k2), {failures} failures, {overflow} colors ≥ 2^(k1+3), errors {errors:?}, {elapsed:.1?}"),
    )
}

fn coloring_lemma() -> Outcome {
    let (m, n, b, attempts) = (64, 64, 8, 50);
    // ⌈(N/B)·e·(MN)^{1/B}⌉ evaluated independently.
    let bound = (n as f64 / b as f64 * std::f64::consts::E * ((m * n) as f64).powf(1.0 / b as f64)).ceil() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut failures = Vec::new();
    let mut most = 0;
    for run in 0..20u64 {
        let system = SetSystem::random(m, n, 512, b, &mut rng);
        match randomized_b_coloring(&system, run, attempts) {
            Ok(c) => {
                let worst = system
                    .sets
                    .iter()
                    .map(|s| (0..c.palette).map(|k| s.iter().filter(|&&v| c.color_of[v] == k).count()).max().unwrap_or(0))
                    .max()
                    .unwrap_or(0);
                let used = c.color_of.iter().collect::<BTreeSet<_>>().len();
                most = most.max(used);
                if worst > b || used > bound || c.attempts > attempts {
                    failures.push(run);
                }
            }
            Err(_) => failures.push(run),
        }
    }
    outcome(
        failures.is_empty() && bound == 62,
        format!("bound {bound} colors, 20 systems, most colors used {most}, failing runs {failures:?}"),
    )
}

fn labeling() -> Outcome {
    let t = ComplexityTable::build_up_to(3, 12, budget());
    let (k1, k2) = (6, 6);
    let lab = match sw_label(&t, k1, k2, 1, 50) {
        Ok(l) => l,
        Err(e) => return outcome(false, format!("labeling failed: {e}")),
    };
    let (mut checked, mut too_long, mut bad_decode, mut largest) = (0, 0, 0, 0);
    for (x, list) in &lab.lists {
        // S_x recomputed from the table.
        let expected: BTreeSet<&BitString> = t.universe().iter().filter(|y| t.k(y, x).is_ok_and(|k| k <= k2)).collect();
        bad_decode += usize::from(list.iter().collect::<BTreeSet<_>>() != expected);
        for y in list {
            let c = lab.f[y];
            let cands: Vec<&BitString> = list.iter().filter(|z| lab.f[*z] == c).collect();
            largest = largest.max(cands.len());
            too_long += usize::from(cands.len() > k1 + k2);
            let idx = cands.iter().position(|z| z == &y).unwrap();
            bad_decode += usize::from(sw_decode(&lab, x, c, idx).map(|d| d.y).as_ref() != Ok(y));
            checked += 1;
        }
    }
    outcome(
        checked > 0 && too_long == 0 && bad_decode == 0,
        format!("{} lists, {checked} labeled pairs, largest candidate list {largest} (≤ {}), {bad_decode} decode failures", lab.lists.len(), k1 + k2),
    )
}

fn fixture_oracle(name: &str, x: &str) -> String {
    let n = x.len();
    let add = |delta: i64| {
        if n == 0 {
            return String::new();
        }
        let v = i64::from_str_radix(x, 2).unwrap();
        format!("{:0n$b}", (v + delta).rem_euclid(1 << n))
    };
    match name {
        "identity" => x.to_string(),
        "not" => x.chars().map(|c| if c == '0' { '1' } else { '0' }).collect(),
        "increment" => add(1),
        "decrement" => add(-1),
        "copy" => format!("{x}|{x}"),
        other => panic!("no oracle for {other}"),
    }
}

fn reversibility() -> Outcome {
    let mut problems = Vec::new();
    let mut runs = 0;
    for name in builtin_names() {
        let compiled = bennett_compile(&builtin(name).unwrap()).unwrap();
        if compiled.spec.check_reversible().is_err() {
            problems.push(format!("{name}: not reversible"));
            continue;
        }
        let fwd = Machine::new(compiled.spec.clone());
        let inv = Machine::new(compiled.spec.invert().unwrap());
        for x in words(8).iter().map(|w| w.bits().iter().map(|&b| if b { '1' } else { '0' }).collect::<String>()) {
            let t = fwd.run(Configuration::with_input(&compiled.spec, &x), RUN_LIMIT);
            let last = &t.last;
            let ok = t.halted()
                && t.erasure_count == 0
                && last.tapes[0].same_contents(&Tape::from_word(&x))
                && last.tapes[compiled.output_tape].same_contents(&Tape::from_word(&fixture_oracle(name, &x)))
                && last.tapes[compiled.history_tape].is_blank();
            let mut back_start = last.clone();
            back_start.state = inv.spec.start.clone();
            let back = inv.run(back_start, RUN_LIMIT);
            let mut forward_configs = replay(&fwd, &t);
            forward_configs.reverse();
            if !ok || !back.halted() || replay(&inv, &back) != forward_configs {
                problems.push(format!("{name} on {x:?}"));
            }
            runs += 1;
        }
    }
    let (inc, dec) = (builtin("increment").unwrap(), builtin("decrement").unwrap());
    let fig1 = fig1_protocol(&inc, &dec, "011", RUN_LIMIT);
    match &fig1 {
        Ok(r) => {
            let last = r.rows.last().unwrap();
            if last.tapes[1..] != ["100".to_string(), String::new(), String::new()]
                || last.tapes[0] != r.rows[0].tapes[0]
                || r.erasure_count != 0
            {
                problems.push(format!("fig1 final row {:?}", last.tapes));
            }
        }
        Err(e) => problems.push(format!("fig1: {e}")),
    }
    let conv = RevProgram::Converted { forward: inc, backward: dec };
    match fig2_concat(&conv, &conv, "001", RUN_LIMIT) {
        Ok(r) => {
            let last = r.rows.last().unwrap();
            if last.tapes[1..] != ["011".to_string(), String::new(), String::new(), String::new()]
                || last.tapes[0] != r.rows[0].tapes[0]
                || r.erasure_count != 0
            {
                problems.push(format!("fig2 final row {:?}", last.tapes));
            }
        }
        Err(e) => problems.push(format!("fig2: {e}")),
    }
    outcome(problems.is_empty(), format!("{runs} compiled runs retraced, fig1/fig2 checked, problems {problems:?}"))
}

fn cost_chain() -> Outcome {
    let t = ComplexityTable::build_up_to(4, 14, budget());
    let u = words(4);
    let (mut chain, mut anti, mut trans) = (0, 0, 0);
    for x in &u {
        for y in &u {
            let (a, b) = (t.k(x, y).unwrap(), t.k(y, x).unwrap());
            let (max, sum) = (a.max(b), a + b);
            chain += usize::from(!(max <= sum && sum <= 2 * max) || t.e3_sum(x, y).unwrap() != sum || t.e1(x, y).unwrap() != max);
            let w = |p: &BitString, q: &BitString| t.k_plain(p).unwrap() as i64 - t.k_plain(q).unwrap() as i64;
            anti += usize::from(t.w_cost(x, y).unwrap() != w(x, y) || t.w_cost(x, y).unwrap() != -t.w_cost(y, x).unwrap());
            for z in &u {
                trans += usize::from(t.w_cost(x, z).unwrap() != t.w_cost(x, y).unwrap() + t.w_cost(y, z).unwrap());
            }
        }
    }
    outcome(
        chain + anti + trans == 0,
        format!("{} pairs: {chain} chain violations, {anti} anti-symmetry violations, {trans} transitivity violations", u.len() * u.len()),
    )
}

fn density() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;

    // Nesting and B3 ⊆ B1 on every center and radius, recounted by hand.
    let t5 = ComplexityTable::build_up_to(5, 16, budget());
    let mut nest_violations = 0;
    let mut totals = [0usize; 15];
    let mut spread_max: f64 = 0.0;
    for x in t5.universe() {
        let mut prev = (0, 0);
        let mut devs = Vec::new();
        for d in 0..=20 {
            let (b1, b3) = (ball_b1(&t5, x, d, None).unwrap(), ball_b3(&t5, x, d, None).unwrap());
            let (mut c1, mut c3) = (0, 0);
            for y in t5.universe().iter().filter(|y| *y != x) {
                let (p, q) = (t5.k(x, y).unwrap(), t5.k(y, x).unwrap());
                c1 += usize::from(p.max(q) <= d);
                c3 += usize::from(p + q <= d);
            }
            nest_violations += usize::from(b1.count != c1 || b3.count != c3 || c3 > c1 || c1 < prev.0 || c3 < prev.1);
            prev = (c1, c3);
            if d <= 14 {
                totals[d] += c1;
                if c1 > 0 {
                    let k_d = t5.k(&index_to_string(d as u64), x).unwrap() as f64;
                    devs.push((c1 as f64).log2() - (d as f64 - k_d));
                }
            }
        }
        if let (Some(lo), Some(hi)) = (devs.iter().copied().reduce(f64::min), devs.iter().copied().reduce(f64::max)) {
            spread_max = spread_max.max(hi - lo);
        }
    }
    let spread_ok = nest_violations == 0 && spread_max <= B1_SPREAD + FLOAT_EPS && totals == B1_TOTALS;
    pass &= spread_ok;
    notes.push(format!("{nest_violations} nesting violations, B1 spread {spread_max:.6} (frozen {B1_SPREAD:.6}), totals match {}", totals == B1_TOTALS));

    // Length-restricted B3 slope around the least compressible length-6 centers.
    let t6 = ComplexityTable::build_up_to(6, 16, budget());
    let len6: Vec<BitString> = BitString::all_of_len(6).collect();
    let k_max = len6.iter().map(|x| t6.k_plain(x).unwrap()).max().unwrap();
    let centers: Vec<&BitString> = len6.iter().filter(|x| t6.k_plain(x).unwrap() + 1 >= k_max).collect();
    let mut slopes: Vec<f64> = Vec::new();
    for x in &centers {
        let count = |d: usize| {
            len6.iter().filter(|y| y != x).filter(|y| t6.k(x, y).unwrap() + t6.k(y, x).unwrap() <= d).count()
        };
        let Some(d0) = (0..=2 * 16).find(|&d| count(d) > 0) else { continue };
        let library = ball_b3(&t6, x, d0, Some(6)).unwrap().count;
        pass &= library == count(d0);
        slopes.push(((count(d0 + 2) as f64).log2() - (count(d0) as f64).log2()) / 2.0);
    }
    let in_band = slopes.iter().filter(|s| (SLOPE_BAND.0..=SLOPE_BAND.1).contains(*s)).count();
    let (lo, hi) = (
        slopes.iter().copied().fold(f64::INFINITY, f64::min),
        slopes.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    );
    pass &= !slopes.is_empty() && in_band == slopes.len();
    notes.push(format!(
        "B3 slope over {} centers with K ≥ {}: {in_band} in [{}, {}], range [{lo:.3}, {hi:.3}]",
        slopes.len(),
        k_max - 1,
        SLOPE_BAND.0,
        SLOPE_BAND.1
    ));
    outcome(pass, notes.join("; "))
}

fn ncd_clustering() -> Outcome {
    let start = Instant::now();
    let corpus = fixture_corpus(1);
    let small = corpus.iter().filter(|f| f.data.len() < 1024).count();
    let items: Vec<(String, Vec<u8>)> = corpus.iter().map(|f| (f.name.clone(), f.data.clone())).collect();
    let m = distance_matrix(&items, &Builtin).unwrap();
    let n = m.len();
    let diag = (0..n).map(|i| m.values[i][i]).fold(0.0, f64::max);
    let gap = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| (m.values[i][j] - m.values[j][i]).abs()).fold(0.0, f64::max);
    let tree = average_linkage(&m.labels, &m.symmetrized()).unwrap();
    let (l, r) = tree.top_split().unwrap();
    let family_of = |name: &String| corpus.iter().find(|f| &f.name == name).unwrap().family;
    let families = |s: &BTreeSet<String>| s.iter().map(family_of).collect::<BTreeSet<_>>();
    let separated = families(&l).len() == 1 && families(&r).len() == 1 && families(&l) != families(&r);
    let elapsed = start.elapsed();
    outcome(
        small == 0 && diag <= NCD_DIAGONAL && gap <= NCD_SYMMETRY && separated && elapsed <= NCD_LIMIT,
        format!("diagonal {diag:.4}, symmetry gap {gap:.4}, top split separates families: {separated}, {elapsed:.1?}; {}", tree.to_newick()),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("prefix-free programs and Kraft sum", prefix_free_and_kraft),
        ("E0 ≥ E1", e0_dominates_e1),
        ("metric axioms for E1", metric_axioms),
        ("conversion codec", conversion_codec),
        ("coloring lemma", coloring_lemma),
        ("labeling candidate lists", labeling),
        ("reversible compilation and protocols", reversibility),
        ("sum/max chain and cost function", cost_chain),
        ("ball density", density),
        ("compression distance clustering", ncd_clustering),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failed += usize::from(!o.pass);
        println!("criterion {:>2} {}: {name} — {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
