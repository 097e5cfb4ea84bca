mod config;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use infodist::codes::BitString;
use infodist::coloring::{color_bound, randomized_b_coloring, sw_label, SetSystem};
use infodist::complexity::{conditional_k, evaluate, ComplexityTable, Metric};
use infodist::conversion::{build, descriptor_length, verify_codec};
use infodist::density::{ball_b1, ball_b3, dispersion_check};
use infodist::machine::{run, ExecBudget, Status};
use infodist::ncd::{average_linkage, compressor_from_spec, distance_matrix, load_dir};
use infodist::reversible::{bennett_compile, fig1_protocol, fig2_concat, run_tm, RevProgram, TMSpec};
use rand::SeedableRng;

use config::{Format, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "infodist", version, about = "Exact information distances on a toy prefix machine")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Longest program searched, in bits [default: 16]
    #[arg(long, global = true)]
    max_len: Option<usize>,
    /// Step budget per program run [default: 4096]
    #[arg(long, global = true)]
    max_steps: Option<u64>,
    /// Output budget per program run, in bits [default: 4096]
    #[arg(long = "max-out", global = true)]
    max_output_bits: Option<usize>,
    /// Seed for every random choice [default: 0]
    #[arg(long, env = "INFODIST_SEED", global = true)]
    seed: Option<u64>,
    /// Output format: json or tsv
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Tables cover every string up to this length [default: 4]
    #[arg(long, global = true)]
    universe_len: Option<usize>,
    /// Worker threads for table building and matrices
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// `key = value` file with the same settings as the flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one program on one input
    Run {
        #[arg(long)]
        program: BitString,
        #[arg(long, default_value = "")]
        input: BitString,
    },
    /// Shortest program computing the target from the condition
    K {
        #[arg(long)]
        target: BitString,
        #[arg(long, default_value = "")]
        given: BitString,
    },
    /// One distance or cost between two strings
    Dist {
        /// e1, e0, e3sum, w, wprime or mi
        #[arg(long)]
        metric: Metric,
        #[arg(long)]
        x: BitString,
        #[arg(long)]
        y: BitString,
    },
    /// Build and verify the conversion graph for (k1, k2)
    Convert {
        #[arg(long)]
        k1: usize,
        #[arg(long)]
        k2: usize,
        /// Also list every edge
        #[arg(long)]
        edges: bool,
    },
    /// Randomized B-coloring of a random set system
    Coloring {
        #[arg(long, default_value_t = 64)]
        m: usize,
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        b: usize,
        #[arg(long, default_value_t = 512)]
        ground: usize,
        #[arg(long, default_value_t = 50)]
        attempts: usize,
    },
    /// Color labels that pick y out of S_x with a short index
    Swlabel {
        #[arg(long)]
        k1: usize,
        #[arg(long)]
        k2: usize,
        #[arg(long, default_value_t = 50)]
        attempts: usize,
    },
    /// Reversible machines
    #[command(subcommand)]
    Rev(RevCommand),
    /// Compression distance matrix and tree for a directory of files
    Ncd {
        #[arg(long)]
        dir: PathBuf,
        /// builtin, or cmd:<program> [args] reading stdin and writing stdout
        #[arg(long, default_value = "builtin")]
        compressor: String,
        /// Where the Newick tree goes
        #[arg(long, default_value = "tree.nwk")]
        tree: PathBuf,
    },
    /// Count a distance ball around x
    Balls {
        #[arg(long)]
        x: BitString,
        #[arg(long)]
        d: usize,
        /// Only count strings of this length
        #[arg(long)]
        n: Option<usize>,
        /// e1 or e3
        #[arg(long, default_value = "e1")]
        metric: String,
    },
    /// Fraction of pairs of length-L strings at distance at least d - slack
    Disperse {
        #[arg(long)]
        len: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        slack: usize,
    },
    /// Run the built-in invariant checks
    Selftest,
}

#[derive(Args, Debug)]
struct MachineArg {
    /// A spec file, or builtin:<name>
    #[arg(long)]
    machine: String,
}

#[derive(Subcommand, Debug)]
enum RevCommand {
    /// Determinism and reversibility of a spec
    Check(MachineArg),
    /// Run a spec on an input
    Run {
        #[command(flatten)]
        machine: MachineArg,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, default_value_t = 1_000_000)]
        limit: u64,
    },
    /// Reversible compilation with a history tape
    Compile(MachineArg),
    /// The inverse machine of a reversible spec
    Invert(MachineArg),
    /// Compute y from x and uncompute everything but y
    Fig1 {
        #[arg(long)]
        forward: String,
        #[arg(long)]
        backward: String,
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 1_000_000)]
        limit: u64,
    },
    /// Run two programs in sequence without leaving a transcript
    Fig2 {
        #[arg(long)]
        p: String,
        /// Makes p a converted program with this inverse
        #[arg(long)]
        p_backward: Option<String>,
        #[arg(long)]
        q: String,
        #[arg(long)]
        q_backward: Option<String>,
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 1_000_000)]
        limit: u64,
    },
}

fn load_machine(arg: &str) -> Result<TMSpec, String> {
    if arg.starts_with("builtin:") {
        return TMSpec::load(arg).map_err(|e| e.to_string());
    }
    let text = std::fs::read_to_string(arg).map_err(|e| format!("{arg}: {e}"))?;
    TMSpec::parse(&text).map_err(|e| format!("{arg}: {e}"))
}

fn rev_program(forward: &str, backward: Option<&str>) -> Result<RevProgram, String> {
    let forward = load_machine(forward)?;
    Ok(match backward {
        Some(b) => RevProgram::Converted { forward, backward: load_machine(b)? },
        None => RevProgram::Reversible(forward),
    })
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

enum Output {
    Value(Value),
    Text(String),
}

fn render(out: Output, format: Format) -> String {
    match out {
        Output::Text(t) => t,
        Output::Value(v) => match format {
            Format::Json => serde_json::to_string_pretty(&v).expect("valid json") + "\n",
            Format::Tsv => match v {
                Value::Object(map) => map
                    .iter()
                    .map(|(k, v)| match v {
                        Value::String(s) => format!("{k}\t{s}\n"),
                        other => format!("{k}\t{other}\n"),
                    })
                    .collect(),
                other => format!("{other}\n"),
            },
        },
    }
}

fn dispatch(cmd: Command, cfg: &RunConfig) -> Result<(Output, bool), String> {
    let budget = ExecBudget::new(cfg.max_steps, cfg.max_output_bits);
    let table = |universe: &[BitString]| ComplexityTable::build(universe, cfg.max_len, budget);
    let ok = |v: Value| Ok((Output::Value(v), true));
    match cmd {
        Command::Run { program, input } => {
            let o = run(&program, &input, &budget);
            let (status, output) = match &o.status {
                Status::Halted(y) => ("halted".to_string(), Some(y.to_string())),
                Status::Undefined(r) => (to_value(r).as_str().unwrap_or("undefined").to_string(), None),
            };
            ok(json!({"program": program, "input": input, "status": status, "output": output,
                "steps": o.steps_used, "input_bits_read": o.input_bits_read}))
        }
        Command::K { target, given } => {
            let e = conditional_k(&target, &given, cfg.max_len, &budget)
                .ok_or_else(|| format!("no program of at most {} bits computes {target} from {given}", cfg.max_len))?;
            ok(json!({"target": target, "condition": given, "value": e.k, "witness": e.witness,
                "discovery_step": e.discovery_step, "max_len": cfg.max_len}))
        }
        Command::Dist { metric, x, y } => {
            let t = table(&[BitString::empty(), x.clone(), y.clone()]);
            ok(to_value(&evaluate(&t, metric, &x, &y)))
        }
        Command::Convert { k1, k2, edges } => {
            let t = table(&BitString::all_up_to(cfg.universe_len).collect::<Vec<_>>());
            let g = build(&t, k1, k2).map_err(|e| e.to_string())?;
            let report = verify_codec(&g);
            let mut v = json!({"k1": k1, "k2": k2, "universe_len": cfg.universe_len, "report": to_value(&report),
                "descriptor": to_value(&descriptor_length(k1, k2)), "verified": report.verified()});
            if edges {
                v["edges"] = to_value(&g.edges);
            }
            Ok((Output::Value(v), report.verified()))
        }
        Command::Coloring { m, n, b, ground, attempts } => {
            if n > ground {
                return Err(format!("sets of {n} elements do not fit a ground set of {ground}"));
            }
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
            let system = SetSystem::random(m, n, ground, b, &mut rng);
            let bound = color_bound::<f64>(m, n, b).map_err(|e| e.to_string())?;
            let c = randomized_b_coloring(&system, cfg.seed, attempts).map_err(|e| e.to_string())?;
            ok(json!({"m": m, "n": n, "b": b, "ground": ground, "bound": bound, "palette": c.palette,
                "colors_used": c.colors_used, "attempts": c.attempts, "max_cell": c.max_cell, "seed": cfg.seed}))
        }
        Command::Swlabel { k1, k2, attempts } => {
            let t = table(&BitString::all_up_to(cfg.universe_len).collect::<Vec<_>>());
            let lab = sw_label(&t, k1, k2, cfg.seed, attempts).map_err(|e| e.to_string())?;
            let lists: serde_json::Map<String, Value> = lab
                .lists
                .iter()
                .map(|(x, list)| {
                    let rows = list
                        .iter()
                        .map(|y| {
                            let c = lab.f[y];
                            let idx = lab.candidates(x, c).map(|cs| cs.iter().position(|z| *z == y)).ok().flatten();
                            json!({"y": y, "label": lab.render(c), "index": idx})
                        })
                        .collect();
                    (x.to_string(), Value::Array(rows))
                })
                .collect();
            ok(json!({"k1": k1, "k2": k2, "b": lab.b, "palette": lab.palette, "width": lab.width,
                "colors_used": lab.colors_used, "attempts": lab.attempts, "max_cell": lab.max_cell, "lists": lists}))
        }
        Command::Rev(rc) => rev(rc, cfg),
        Command::Ncd { dir, compressor, tree } => {
            let comp = compressor_from_spec(&compressor).map_err(|e| e.to_string())?;
            let items = load_dir(&dir).map_err(|e| e.to_string())?;
            let m = distance_matrix(&items, comp.as_ref()).map_err(|e| e.to_string())?;
            let newick = average_linkage(&m.labels, &m.symmetrized()).expect("square matrix").to_newick();
            std::fs::write(&tree, format!("{newick}\n")).map_err(|e| format!("{}: {e}", tree.display()))?;
            match cfg.format.unwrap_or(Format::Tsv) {
                Format::Tsv => Ok((Output::Text(m.to_tsv()), true)),
                Format::Json => ok(json!({"labels": m.labels, "values": m.values, "newick": newick,
                    "max_diagonal": m.max_diagonal(), "symmetry_gap": m.symmetry_gap(), "compressor": comp.name()})),
            }
        }
        Command::Balls { x, d, n, metric } => {
            let len = cfg.universe_len.max(x.len());
            let t = table(&BitString::all_up_to(len).collect::<Vec<_>>());
            let r = match metric.as_str() {
                "e1" => ball_b1(&t, &x, d, n),
                "e3" => ball_b3(&t, &x, d, n),
                other => return Err(format!("unknown ball metric {other:?}; use e1 or e3")),
            }
            .map_err(|e| e.to_string())?;
            ok(to_value(&r))
        }
        Command::Disperse { len, d, slack } => {
            let set: Vec<BitString> = BitString::all_of_len(len).collect();
            let r = dispersion_check(&table(&set), &set, d, slack).map_err(|e| e.to_string())?;
            ok(to_value(&r))
        }
        Command::Selftest => {
            let checks = selftest::run_all();
            let passed = checks.iter().all(|c| c.pass);
            Ok((Output::Value(json!({"checks": to_value(&checks), "passed": passed})), passed))
        }
    }
}

fn rev(cmd: RevCommand, cfg: &RunConfig) -> Result<(Output, bool), String> {
    let spec_out = |spec: &TMSpec, extra: Value| match cfg.format {
        Some(Format::Json) | Some(Format::Tsv) => {
            let mut v = json!({"spec": spec.to_string()});
            if let (Value::Object(m), Value::Object(e)) = (&mut v, extra) {
                m.extend(e);
            }
            Output::Value(v)
        }
        None => Output::Text(spec.to_string()),
    };
    match cmd {
        RevCommand::Check(m) => {
            let spec = load_machine(&m.machine)?;
            let v = json!({"tapes": spec.tapes, "rules": spec.rules.len(), "deterministic": spec.check_deterministic().is_ok(),
                "reversible": spec.is_reversible(), "domain_overlaps": spec.domain_overlaps(),
                "range_overlaps": spec.range_overlaps()});
            Ok((Output::Value(v), true))
        }
        RevCommand::Run { machine, input, limit } => {
            let spec = load_machine(&machine.machine)?;
            let t = run_tm(&spec, &input, limit);
            let tapes: Vec<Value> = t.last.tapes.iter().map(|tp| json!({"contents": tp.contents(), "head": tp.head})).collect();
            let v = json!({"status": to_value(&t.status), "steps": t.steps.len(), "erasures": t.erasure_count,
                "state": t.last.state.as_ref(), "tapes": tapes});
            Ok((Output::Value(v), t.halted()))
        }
        RevCommand::Compile(m) => {
            let c = bennett_compile(&load_machine(&m.machine)?).map_err(|e| e.to_string())?;
            let extra = json!({"copy_start": c.copy_start.as_ref(), "uncompute_start": c.uncompute_start.as_ref(),
                "history_tape": c.history_tape, "output_tape": c.output_tape});
            Ok((spec_out(&c.spec, extra), true))
        }
        RevCommand::Invert(m) => {
            let inv = load_machine(&m.machine)?.invert().map_err(|e| e.to_string())?;
            Ok((spec_out(&inv, json!({})), true))
        }
        RevCommand::Fig1 { forward, backward, input, limit } => {
            let r = fig1_protocol(&load_machine(&forward)?, &load_machine(&backward)?, &input, limit).map_err(|e| e.to_string())?;
            Ok((Output::Value(to_value(&r)), true))
        }
        RevCommand::Fig2 { p, p_backward, q, q_backward, input, limit } => {
            let p = rev_program(&p, p_backward.as_deref())?;
            let q = rev_program(&q, q_backward.as_deref())?;
            let r = fig2_concat(&p, &q, &input, limit).map_err(|e| e.to_string())?;
            Ok((Output::Value(to_value(&r)), true))
        }
    }
}

fn resolve(global: &GlobalArgs) -> Result<RunConfig, String> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &global.config {
        cfg.apply_file(path)?;
    }
    let flags: [(&str, Option<String>); 7] = [
        ("max_len", global.max_len.map(|v| v.to_string())),
        ("max_steps", global.max_steps.map(|v| v.to_string())),
        ("max_output_bits", global.max_output_bits.map(|v| v.to_string())),
        ("seed", global.seed.map(|v| v.to_string())),
        ("format", global.format.map(|f| if f == Format::Json { "json" } else { "tsv" }.to_string())),
        ("universe_len", global.universe_len.map(|v| v.to_string())),
        ("jobs", global.jobs.map(|v| v.to_string())),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            cfg.set(k, &v)?;
        }
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let cfg = match resolve(&cli.global) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(jobs) = cfg.jobs {
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match dispatch(cli.command, &cfg) {
        Ok((out, success)) => {
            print!("{}", render(out, cfg.format.unwrap_or(Format::Json)));
            if success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
