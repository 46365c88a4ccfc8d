//! `vtree`: command-line front end. Reports go to stdout as JSON (or text),
//! a one-line summary goes to stderr.
//!
//! Exit codes: 0 result produced, 1 verification failed, 2 budget exhausted
//! or undecided, 3 input error.

mod check;

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use vtree::alternative::{dichotomy, proximal_contraction, stable_intersection, stable_set, verify_pingpong};
use vtree::format::{clopen_to_json, parse_element, parse_generating_set, points_from_json};
use vtree::random::random_element;
use vtree::revealing::{dynamics, hyp_power_bound, is_elliptic, order, reveal, reveal_bfs, reveal_rolling, ROLLING_STEPS};
use vtree::subgroup::{
    all_elliptic_or_witness, common_admissible_partition, finite_closure, is_invariant_set, orbit, EllipticCheck,
};
use vtree::{
    Address, BoundaryPoint, Budgets, ClopenSet, Element, Error, GeneratingSet, PingPongWitness, Radius, Tree,
    TypeGraph, Word,
};

#[derive(Parser)]
#[command(name = "vtree", version, about = "Exact computation in Higman-Thompson groups of rooted trees")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Type graph file (JSON). `binary` or `regular:D,K` name built-in trees.
    #[arg(long, global = true, default_value = "binary")]
    tree: String,
    /// Seed for commands that sample.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    #[arg(long, global = true, default_value_t = 8)]
    budget_word_length: usize,
    #[arg(long, global = true, default_value_t = 512)]
    budget_orbit_size: usize,
    #[arg(long, global = true, default_value_t = 12)]
    budget_expansion_depth: usize,
    #[arg(long, global = true, default_value_t = 10_000)]
    budget_dovetail_steps: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Strategy {
    Auto,
    Rolling,
    Bfs,
}

#[derive(Subcommand)]
enum Command {
    /// Product e1 ∘ e2 ∘ ⋯ (the last element acts first).
    Compose {
        #[arg(long = "element", required = true)]
        elements: Vec<String>,
    },
    /// Inverse element
    Inverse {
        #[arg(long)]
        element: String,
    },
    /// Image of a point and/or a clopen set.
    Apply {
        #[arg(long)]
        element: String,
        #[arg(long)]
        point: Option<String>,
        /// Comma-separated ball addresses; `ε` is the whole boundary, `""` the empty set.
        #[arg(long)]
        clopen: Option<String>,
    },
    /// Revealing pair with its chain classification
    Reveal {
        #[arg(long)]
        element: String,
        #[arg(long, value_enum, default_value_t = Strategy::Auto)]
        strategy: Strategy,
    },
    /// Stable/hyperbolic decomposition; with --eps also the power bound.
    Dynamics {
        #[arg(long)]
        element: String,
        #[arg(long)]
        eps: Option<String>,
    },
    /// Ellipticity of an element, or a non-elliptic word in a generating set.
    Elliptic {
        #[arg(long)]
        element: Option<String>,
        #[arg(long)]
        gens: Option<String>,
    },
    /// Order of an element: a number or "inf"
    Order {
        #[arg(long)]
        element: String,
    },
    /// Orbit of a point under a generating set, within the orbit-size budget
    Orbit {
        #[arg(long)]
        gens: String,
        #[arg(long)]
        point: String,
    },
    /// The whole group, if finite within the orbit-size budget.
    Closure {
        #[arg(long)]
        gens: String,
    },
    /// A ball partition on which the finite group acts by permutations.
    Partition {
        #[arg(long)]
        gens: String,
    },
    /// Stable set of an element or intersection over a generating set.
    Stable {
        #[arg(long)]
        element: Option<String>,
        #[arg(long)]
        gens: Option<String>,
    },
    /// Contracting element built from the generators, in order.
    Contract {
        #[arg(long)]
        gens: String,
        #[arg(long)]
        eps: String,
    },
    /// Re-verifies a dichotomy report from scratch.
    PingpongVerify {
        #[arg(long)]
        report: String,
    },
    /// Finite orbit or verified ping-pong pair for a generating set
    Dichotomy {
        #[arg(long)]
        gens: String,
    },
    /// Seeded random element with at most --size carets per tree
    RandomElement {
        #[arg(long, default_value_t = 3)]
        size: usize,
    },
    /// Runs the invariant suite on the built-in corpus.
    Check {
        #[arg(long, default_value_t = 40)]
        samples: u64,
    },
}

/// What a command produced.
struct Outcome {
    report: Value,
    text: String,
    summary: String,
    code: u8,
}

impl Outcome {
    fn ok(report: Value, text: impl Into<String>) -> Self {
        let text = text.into();
        Outcome { report, summary: text.lines().next().unwrap_or("").to_string(), text, code: 0 }
    }

    fn with_code(mut self, code: u8) -> Self {
        self.code = code;
        self
    }
}

/// An input problem, reported with exit code 3.
struct InputError(String);

impl InputError {
    fn at(source: &str, e: Error) -> Self {
        InputError(format!("{source}: {e}"))
    }
}

type CmdResult = Result<Outcome, InputError>;

fn read(path: &str) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{path}: {e}")))
}

fn load_tree(spec: &str) -> Result<Tree, InputError> {
    if spec == "binary" {
        return Ok(TypeGraph::binary());
    }
    if let Some(rest) = spec.strip_prefix("regular:") {
        let parsed: Option<(usize, usize)> =
            rest.split_once(',').and_then(|(d, k)| Some((d.trim().parse().ok()?, k.trim().parse().ok()?)));
        return match parsed {
            Some((d, k)) if (1..=36).contains(&k) && (2..=36).contains(&d) => Ok(TypeGraph::regular(d, k)),
            _ => Err(InputError(format!("--tree {spec}: expected regular:D,K with 2 <= D <= 36, 1 <= K <= 36"))),
        };
    }
    TypeGraph::from_json(&read(spec)?).map_err(|e| InputError::at(spec, e))
}

/// An element from a file, or an inline `builtin:NAME` or `pair{...}` literal.
fn load_element(tree: &Tree, spec: &str) -> Result<Element, InputError> {
    let inline = spec.starts_with("builtin:") || spec.starts_with("pair{");
    let text = if inline && !Path::new(spec).exists() { spec.to_string() } else { read(spec)? };
    parse_element(tree, &text).map_err(|e| InputError::at(spec, e))
}

fn load_gens(tree: &Tree, spec: &str) -> Result<GeneratingSet, InputError> {
    let text = if spec == "builtin" && !Path::new(spec).exists() { "builtin".to_string() } else { read(spec)? };
    parse_generating_set(tree, &text).map_err(|e| InputError::at(spec, e))
}

fn parse_point(tree: &Tree, s: &str) -> Result<BoundaryPoint, InputError> {
    let x: BoundaryPoint = s.parse().map_err(|e| InputError::at("--point", e))?;
    x.validate(tree).map_err(|e| InputError::at("--point", e))?;
    Ok(x)
}

fn parse_clopen(tree: &Tree, s: &str) -> Result<ClopenSet, InputError> {
    let balls = if s.trim().is_empty() {
        Vec::new()
    } else {
        s.split(',')
            .map(|t| Address::parse(t.trim().trim_matches('"')).map_err(|e| InputError::at("--clopen", e)))
            .collect::<Result<Vec<_>, _>>()?
    };
    ClopenSet::from_balls(tree, balls).map_err(|e| InputError::at("--clopen", e))
}

fn parse_eps(s: &str) -> Result<Radius, InputError> {
    s.parse().map_err(|e| InputError::at("--eps", e))
}

fn run(cmd: &Command, g: &Global) -> CmdResult {
    let tree = load_tree(&g.tree)?;
    let budgets = Budgets {
        word_length: g.budget_word_length,
        orbit_size: g.budget_orbit_size,
        expansion_depth: g.budget_expansion_depth,
        dovetail_steps: g.budget_dovetail_steps,
    };
    match cmd {
        Command::Compose { elements } => {
            let mut acc = Element::identity(&tree);
            for spec in elements {
                acc = acc.compose(&load_element(&tree, spec)?).map_err(|e| InputError::at(spec, e))?;
            }
            Ok(Outcome::ok(json!({ "element": acc.to_string() }), acc.to_string()))
        }
        Command::Inverse { element } => {
            let e = load_element(&tree, element)?.inverse();
            Ok(Outcome::ok(json!({ "element": e.to_string() }), e.to_string()))
        }
        Command::Apply { element, point, clopen } => {
            let e = load_element(&tree, element)?;
            if point.is_none() && clopen.is_none() {
                return Err(InputError("apply: give --point and/or --clopen".into()));
            }
            let mut report = json!({});
            let mut text = Vec::new();
            if let Some(p) = point {
                let y = e.apply_point(&parse_point(&tree, p)?);
                report["point"] = json!(y.to_string());
                text.push(y.to_string());
            }
            if let Some(c) = clopen {
                let img = e.apply_clopen(&parse_clopen(&tree, c)?).map_err(|e| InputError::at("--clopen", e))?;
                report["clopen"] = clopen_to_json(&img);
                text.push(img.to_string());
            }
            Ok(Outcome::ok(report, text.join("\n")))
        }
        Command::Reveal { element, strategy } => {
            let e = load_element(&tree, element)?;
            let nodes = 1usize << budgets.expansion_depth.min(40);
            let rp = match strategy {
                Strategy::Auto => Some(reveal(&e)),
                Strategy::Rolling => reveal_rolling(&e, ROLLING_STEPS),
                Strategy::Bfs => reveal_bfs(&e, nodes),
            };
            Ok(match rp {
                Some(rp) => Outcome::ok(rp.to_json(), format!("revealing pair {}", rp.pair)),
                None => Outcome::ok(json!({ "revealing_pair": null }), "no revealing pair within budget").with_code(2),
            })
        }
        Command::Dynamics { element, eps } => {
            let e = load_element(&tree, element)?;
            let rep = dynamics(&e);
            let mut report = rep.to_json();
            let mut text = format!(
                "U = {}  V = {}  per_att = {:?}  per_rep = {:?}  iso_power = {}",
                rep.u, rep.v, rep.per_att, rep.per_rep, rep.iso_power
            );
            if let Some(eps) = eps {
                match hyp_power_bound(&e, &rep, parse_eps(eps)?) {
                    Ok(cert) => {
                        text.push_str(&format!("\nN = {}", cert.n));
                        report["hyp"] = cert.to_json();
                    }
                    Err(err) => {
                        report["hyp"] = json!({ "error": err.to_string() });
                        return Ok(Outcome::ok(report, format!("{text}\n{err}")).with_code(2));
                    }
                }
            }
            Ok(Outcome::ok(report, text))
        }
        Command::Elliptic { element, gens } => match (element, gens) {
            (Some(el), None) => {
                let ell = is_elliptic(&load_element(&tree, el)?);
                Ok(Outcome::ok(json!({ "elliptic": ell }), ell.to_string()))
            }
            (None, Some(gs)) => {
                let set = load_gens(&tree, gs)?;
                Ok(match all_elliptic_or_witness(&set, budgets.word_length) {
                    EllipticCheck::Witness(w, e) => Outcome::ok(
                        json!({ "all_elliptic": false, "witness": { "word": w.render(set.names()), "element": e.to_string() } }),
                        format!("non-elliptic: {}", w.render(set.names())),
                    ),
                    EllipticCheck::AllElliptic { checked } => Outcome::ok(
                        json!({ "all_elliptic": true, "checked": checked, "word_length": budgets.word_length }),
                        format!("all {checked} elements up to length {} are elliptic", budgets.word_length),
                    )
                    .with_code(2),
                })
            }
            _ => Err(InputError("elliptic: give exactly one of --element, --gens".into())),
        },
        Command::Order { element } => {
            let o = order(&load_element(&tree, element)?);
            Ok(Outcome::ok(json!({ "order": o.to_string() }), o.to_string()))
        }
        Command::Orbit { gens, point } => {
            let set = load_gens(&tree, gens)?;
            let x = parse_point(&tree, point)?;
            Ok(match orbit(&x, &set, budgets.orbit_size) {
                Some(o) => Outcome::ok(o.to_json(set.names()), format!("finite orbit of {} points", o.points.len())),
                None => Outcome::ok(
                    json!({ "orbit": null, "exceeded": budgets.orbit_size }),
                    format!("orbit exceeds {} points", budgets.orbit_size),
                )
                .with_code(2),
            })
        }
        Command::Closure { gens } => {
            let set = load_gens(&tree, gens)?;
            Ok(match finite_closure(&set, budgets.orbit_size) {
                Some(gr) => Outcome::ok(
                    json!({
                        "size": gr.len(),
                        "exponent": gr.exponent(),
                        "elements": gr.elements.iter().zip(&gr.words)
                            .map(|(e, w)| json!({ "word": w.render(set.names()), "element": e.to_string() }))
                            .collect::<Vec<_>>(),
                    }),
                    format!("finite group of order {}", gr.len()),
                ),
                None => Outcome::ok(
                    json!({ "closure": null, "exceeded": budgets.orbit_size }),
                    format!("group exceeds {} elements", budgets.orbit_size),
                )
                .with_code(2),
            })
        }
        Command::Partition { gens } => {
            let set = load_gens(&tree, gens)?;
            Ok(match finite_closure(&set, budgets.orbit_size) {
                Some(gr) => {
                    let p = common_admissible_partition(&gr);
                    let leaves: Vec<String> = p.leaves().iter().map(|a| a.to_string()).collect();
                    Outcome::ok(json!({ "partition": leaves }), p.to_string())
                }
                None => Outcome::ok(json!({ "partition": null, "exceeded": budgets.orbit_size }), "group is not finite within budget")
                    .with_code(2),
            })
        }
        Command::Stable { element, gens } => {
            let w = match (element, gens) {
                (Some(el), None) => stable_set(&load_element(&tree, el)?),
                (None, Some(gs)) => {
                    let set = load_gens(&tree, gs)?;
                    stable_intersection(&tree, set.generators()).map_err(|e| InputError::at(gs, e))?
                }
                _ => return Err(InputError("stable: give exactly one of --element, --gens".into())),
            };
            Ok(Outcome::ok(json!({ "stable": clopen_to_json(&w) }), w.to_string()))
        }
        Command::Contract { gens, eps } => {
            let set = load_gens(&tree, gens)?;
            let eps = parse_eps(eps)?;
            match proximal_contraction(set.generators(), eps) {
                Ok(c) => {
                    let words: Vec<Word> = (0..set.len())
                        .map(|i| Word::letter(vtree::subgroup::Letter { generator: i, inverse: false }))
                        .collect();
                    let mut report = c.to_json();
                    report["word"] = json!(c.word(&words).render(set.names()));
                    report["verified"] = json!(c.verify());
                    Ok(Outcome::ok(report, format!("h = {}", c.h)))
                }
                Err(e @ Error::SearchLimit(_)) => {
                    Ok(Outcome::ok(json!({ "error": e.to_string() }), e.to_string()).with_code(2))
                }
                Err(e) => Err(InputError::at(gens, e)),
            }
        }
        Command::PingpongVerify { report } => pingpong_verify(report),
        Command::Dichotomy { gens } => {
            let set = load_gens(&tree, gens)?;
            let r = dichotomy(&set, &budgets);
            let code = if matches!(r.verdict, vtree::Verdict::Undecided(_)) { 2 } else { 0 };
            let text = match &r.verdict {
                vtree::Verdict::FiniteOrbit(o) => format!("FiniteOrbit {:?}", o.points),
                vtree::Verdict::PingPong(w) => {
                    format!("PingPong g = {} h = {}", w.g_word.render(set.names()), w.h_word.render(set.names()))
                }
                vtree::Verdict::Undecided(reason) => format!("Undecided: {reason}"),
            };
            Ok(Outcome::ok(r.to_json(&set), text).with_code(code))
        }
        Command::RandomElement { size } => {
            let e = random_element(&tree, g.seed, *size).map_err(|e| InputError::at("random-element", e))?;
            Ok(Outcome::ok(json!({ "element": e.to_string(), "seed": g.seed, "size": size }), e.to_string()))
        }
        Command::Check { samples } => Ok(check::run_suite(g.seed, *samples)),
    }
}

fn field<'a>(v: &'a Value, path: &str, key: &str) -> Result<&'a Value, InputError> {
    v.get(key).ok_or_else(|| InputError(format!("{path}: missing field `{key}`")))
}

/// Re-checks a dichotomy report using only its own contents.
fn pingpong_verify(path: &str) -> CmdResult {
    let text = read(path)?;
    let v: Value = serde_json::from_str(&text)
        .map_err(|e| InputError(format!("{path}: parse error at line {} column {}: {e}", e.line(), e.column())))?;
    let tree = TypeGraph::from_json(&field(&v, path, "tree")?.to_string()).map_err(|e| InputError::at(path, e))?;
    let gens = field(&v, path, "generators")?
        .as_array()
        .ok_or_else(|| InputError(format!("{path}: `generators` must be an array")))?;
    let mut names = Vec::new();
    let mut elems = Vec::new();
    for gv in gens {
        let name = gv.get("name").and_then(Value::as_str);
        let el = gv.get("element").and_then(Value::as_str);
        let (Some(name), Some(el)) = (name, el) else {
            return Err(InputError(format!("{path}: generator entries need `name` and `element`")));
        };
        names.push(name.to_string());
        elems.push(parse_element(&tree, el).map_err(|e| InputError::at(path, e))?);
    }
    let set = GeneratingSet::new(names, elems).map_err(|e| InputError::at(path, e))?;
    let verdict = field(&v, path, "verdict")?.as_str().unwrap_or("");
    let (verified, detail) = match verdict {
        "PingPong" => {
            let w = PingPongWitness::from_json(&tree, field(&v, path, "pingpong")?, set.names())
                .map_err(|e| InputError::at(path, e))?;
            match verify_pingpong(&w) {
                Err(reason) => (false, reason.to_string()),
                Ok(()) if !w.words_match(&set) => (false, "words".to_string()),
                Ok(()) => (true, "ping-pong conditions and words hold".to_string()),
            }
        }
        "FiniteOrbit" => {
            let o = field(&v, path, "finite_orbit")?;
            let points = points_from_json(&tree, field(o, path, "points")?).map_err(|e| InputError::at(path, e))?;
            let words = field(o, path, "words")?
                .as_array()
                .ok_or_else(|| InputError(format!("{path}: `words` must be an array")))?
                .iter()
                .map(|w| Word::parse(w.as_str().unwrap_or(""), set.names()).map_err(|e| InputError::at(path, e)))
                .collect::<Result<Vec<_>, _>>()?;
            let words_ok = words.len() == points.len()
                && points.first().is_some_and(|x0| {
                    words.iter().zip(&points).all(|(w, p)| &w.evaluate(&set).apply_point(x0) == p)
                });
            if !is_invariant_set(&points, &set) {
                (false, "orbit is not invariant".to_string())
            } else if !words_ok {
                (false, "words".to_string())
            } else {
                (true, format!("invariant set of {} points", points.len()))
            }
        }
        other => return Err(InputError(format!("{path}: no witness to verify for verdict `{other}`"))),
    };
    let out = Outcome::ok(
        json!({ "verdict": verdict, "verified": verified, "detail": detail }),
        format!("{verdict}: {} ({detail})", if verified { "verified" } else { "FAILED" }),
    );
    Ok(if verified { out } else { out.with_code(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.global.threads.unwrap_or(0);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(3);
        }
    };
    match pool.install(|| run(&cli.command, &cli.global)) {
        Ok(out) => {
            match cli.global.format {
                OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&out.report).unwrap()),
                OutputFormat::Text => println!("{}", out.text),
            }
            eprintln!("{}", out.summary);
            ExitCode::from(out.code)
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

