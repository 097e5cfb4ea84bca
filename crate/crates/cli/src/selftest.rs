//! Small fixed-parameter checks, one or more per subcommand.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use infodist::codes::BitString;
use infodist::coloring::{randomized_b_coloring, sw_decode, sw_label, SetSystem};
use infodist::complexity::{conditional_k, ComplexityTable};
use infodist::conversion::{build, verify_codec};
use infodist::density::{ball_b1, ball_b3, dispersion_check};
use infodist::machine::{enumerate_halting, run, ExecBudget};
use infodist::ncd::{ncd, Builtin};
use infodist::reversible::{bennett_compile, builtin, fig1_protocol, Configuration, Machine, Tape};

pub const SUBCOMMANDS: [&str; 10] = ["run", "k", "dist", "convert", "coloring", "swlabel", "rev", "ncd", "balls", "disperse"];

#[derive(Debug, Serialize)]
pub struct Check {
    pub command: &'static str,
    pub name: &'static str,
    pub pass: bool,
}

fn b(s: &str) -> BitString {
    s.parse().expect("literal bit string")
}

pub fn run_all() -> Vec<Check> {
    let budget = ExecBudget::default();
    let small = ComplexityTable::build_up_to(2, 12, budget);
    let mut checks = Vec::new();
    let mut check = |command, name, pass: bool| checks.push(Check { command, name, pass });

    check("run", "111 halts on empty output", run(&b("111"), &BitString::empty(), &budget).output() == Some(&BitString::empty()));
    let programs = enumerate_halting(&BitString::empty(), 14, &budget);
    let mut sorted: Vec<&[bool]> = programs.iter().map(|h| h.program.bits()).collect();
    sorted.sort();
    check("run", "halting programs are prefix-free", sorted.windows(2).all(|w| !w[1].starts_with(w[0])));

    let k0 = conditional_k(&b("0"), &BitString::empty(), 16, &budget);
    check("k", "K(0) = 5 with witness 00111", k0.is_some_and(|e| e.k == 5 && e.witness == b("00111")));

    check("dist", "E1(0,1) = 5", small.e1(&b("0"), &b("1")) == Ok(5));
    check("dist", "E1 symmetric", small.universe().iter().all(|x| small.universe().iter().all(|y| small.e1(x, y) == small.e1(y, x))));

    check("convert", "codec round-trips for (4,5)", build(&small, 4, 5).is_ok_and(|g| verify_codec(&g).verified()));

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let system = SetSystem::random(16, 16, 128, 4, &mut rng);
    check("coloring", "random 16x16 system, B = 4", randomized_b_coloring(&system, 1, 50).is_ok_and(|c| c.max_cell <= 4));

    let labeled = sw_label(&small, 6, 6, 1, 50).is_ok_and(|lab| {
        lab.lists.iter().all(|(x, list)| {
            list.iter().all(|y| {
                let c = lab.f[y];
                let cands = lab.candidates(x, c).unwrap_or_default();
                let idx = cands.iter().position(|z| *z == y).unwrap_or(usize::MAX);
                cands.len() <= 12 && sw_decode(&lab, x, c, idx).is_ok_and(|d| &d.y == y)
            })
        })
    });
    check("swlabel", "labels decode with lists of at most k1 + k2", labeled);

    let not = builtin("not").expect("fixture");
    let compiled = bennett_compile(&not);
    let bennett = compiled.as_ref().is_ok_and(|c| {
        let m = Machine::new(c.spec.clone());
        ["", "0", "10", "0110"].iter().all(|x| {
            let t = m.run(Configuration::with_input(&c.spec, x), 100_000);
            let flipped: String = x.chars().map(|ch| if ch == '0' { '1' } else { '0' }).collect();
            t.halted()
                && t.erasure_count == 0
                && t.last.tapes[c.history_tape].is_blank()
                && t.last.tapes[c.output_tape].same_contents(&Tape::from_word(&flipped))
        })
    });
    check("rev", "compiled NOT is reversible and clean", compiled.is_ok_and(|c| c.spec.is_reversible()) && bennett);
    let (inc, dec) = (builtin("increment").expect("fixture"), builtin("decrement").expect("fixture"));
    let fig1 = fig1_protocol(&inc, &dec, "011", 1_000_000);
    check("rev", "fig1 leaves only y = 100", fig1.is_ok_and(|r| r.erasure_count == 0 && r.rows.last().is_some_and(|row| row.tapes[1] == "100" && row.tapes[2..].iter().all(String::is_empty))));

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (a, c): (Vec<u8>, Vec<u8>) = ((0..2048).map(|_| rng.gen()).collect(), (0..2048).map(|_| rng.gen()).collect());
    let near = ncd::<f64>(&a, &a, &Builtin).unwrap_or(1.0);
    let far = ncd::<f64>(&a, &c, &Builtin).unwrap_or(0.0);
    check("ncd", "self distance small, unrelated distance large", near <= 0.1 && far > 0.9);

    let x = b("01");
    let nested = (0..=14).try_fold((0, 0), |prev, d| {
        let (b1, b3) = (ball_b1(&small, &x, d, None).ok()?, ball_b3(&small, &x, d, None).ok()?);
        (b3.count <= b1.count && b1.count >= prev.0 && b3.count >= prev.1).then_some((b1.count, b3.count))
    });
    check("balls", "balls nest and B3 within B1", nested.is_some());

    let len2: Vec<BitString> = BitString::all_of_len(2).collect();
    check("disperse", "pairs of length-2 strings are spread", dispersion_check(&small, &len2, 2, 1).is_ok_and(|r| r.fraction >= 0.5));
    let covered = SUBCOMMANDS.iter().all(|s| checks.iter().any(|c| c.command == *s));
    checks.push(Check { command: "selftest", name: "every other subcommand has a check", pass: covered });
    checks
}
