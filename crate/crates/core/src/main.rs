//! `robredux` command-line interface: gen, reduce, solve, verify.
//!
//! Results go to stdout as JSON, diagnostics to stderr. Exit codes: 0 done,
//! 1 property violation, 2 usage or input error, 3 enumeration guard hit.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use robredux::adjmip::{self, AffineRhsMip, AttackTarget, MipOptions};
use robredux::formula::{self, Clause, KStageRAdjSatInstance};
use robredux::graph_reduce::{self, Construction, GadgetMap, Options, RecoveryCosts, VcAdversary};
use robredux::lp::{self, ObjectiveUncertaintyProblem};
use robredux::qsolve;
use robredux::robopt::{self, RobustGraphInstance, Stage};
use robredux::sat_reduce;
use robredux::verify::{self, Corpus, Theorem, VerifyOptions};
use robredux::{corpus, rational, Error};

#[derive(Parser)]
#[command(name = "robredux", version, about = "Reductions and exact checkers for robust multi-stage problems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a seeded random instance, or an exhaustive pool.
    Gen(GenArgs),
    /// Reduce an instance file to another problem.
    Reduce(ReduceArgs),
    /// Solve an instance file exactly.
    Solve(SolveArgs),
    /// Compare source and reduced answers over a corpus.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Qsat,
    Radjsat,
    Kradjsat,
    ObjectiveUncertainty,
}

#[derive(Args)]
struct GenArgs {
    kind: GenKind,
    #[arg(long, required_unless_present = "exhaustive")]
    seed: Option<u64>,
    /// Block size.
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[arg(long, default_value_t = 3)]
    clauses: usize,
    #[arg(long, default_value_t = 1)]
    gamma: u32,
    /// Number of stages (kradjsat).
    #[arg(long, default_value_t = 3)]
    k: u32,
    /// Write the whole fixed pool for --n into the --out directory.
    #[arg(long)]
    exhaustive: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Radjsat,
    TwoStageIs,
    RecoverableIs,
    TwoStageTsp,
    RecoverableTsp,
    TwoStageVc,
    RecoverableVc,
    AdjMip,
}

#[derive(Clone, Copy, ValueEnum)]
enum AttackArg {
    Y,
    Z,
}

impl From<AttackArg> for AttackTarget {
    fn from(a: AttackArg) -> Self {
        match a {
            AttackArg::Y => AttackTarget::Y,
            AttackArg::Z => AttackTarget::Z,
        }
    }
}

#[derive(Args, Clone)]
struct GadgetArgs {
    /// Recoverable IS: value the blown-up X vertices (V₁) in recovery as well.
    #[arg(long)]
    paid_recourse: bool,
    /// VC: let the adversary act on the positive y vertices instead of ȳ.
    #[arg(long)]
    positive_y: bool,
}

impl GadgetArgs {
    fn options(&self) -> Options {
        Options {
            recovery_costs: if self.paid_recourse { RecoveryCosts::PaidRecourse } else { RecoveryCosts::Unchanged },
            vc_adversary: if self.positive_y { VcAdversary::PositiveY } else { VcAdversary::NegatedY },
        }
    }
}

#[derive(Args)]
struct ReduceArgs {
    input: PathBuf,
    #[arg(long)]
    to: Target,
    /// Output file; provenance goes to `<out>.map.json`.
    #[arg(long)]
    out: PathBuf,
    /// Second-stage block attacked by the MIP's ζ-rows.
    #[arg(long, value_enum, default_value = "z")]
    attack: AttackArg,
    #[command(flatten)]
    gadget: GadgetArgs,
}

#[derive(Args)]
struct SolveArgs {
    input: PathBuf,
    /// Gadget map of a reduced graph instance; enables the structured decider.
    #[arg(long)]
    map: Option<PathBuf>,
    /// Candidate count for objective-uncertainty problems (K-adaptability).
    #[arg(long)]
    m: Option<usize>,
    /// Fall back to sampling for MIPs without threshold structure.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    theorem: Theorem,
    #[arg(long)]
    corpus: Corpus,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "y")]
    attack: AttackArg,
    #[command(flatten)]
    gadget: GadgetArgs,
}

/// Failure with its exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TooLarge { .. } => 3,
            Error::Parse(_) | Error::Json(_) | Error::Io(_) | Error::InvalidInstance(_) => 2,
            _ => 1,
        };
        Fail(code, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Fail {
    Fail(2, msg.into())
}

type Out = Result<(Value, u8), Fail>;

fn write(path: &Path, text: &str) -> Result<(), Fail> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(Error::from)?;
    }
    std::fs::write(path, text).map_err(|e| Fail::from(Error::from(e)))
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn gen(a: &GenArgs) -> Out {
    if a.exhaustive {
        let dir = a.out.as_ref().ok_or_else(|| usage("--exhaustive writes a directory; pass --out"))?;
        let files: Vec<(String, String)> = match (a.kind, a.n) {
            (GenKind::Qsat, 1) => corpus::exhaustive_qsat_n1(2)
                .iter()
                .enumerate()
                .map(|(i, q)| (format!("{i:04}.qsat"), formula::write_qsat(q)))
                .collect(),
            (GenKind::Radjsat, 1) => corpus::exhaustive_radjsat_n1()
                .iter()
                .enumerate()
                .map(|(i, r)| (format!("{i:04}.radj"), formula::write_radjsat(r)))
                .collect(),
            (GenKind::Radjsat, 2) => corpus::exhaustive_radjsat_n2()
                .iter()
                .enumerate()
                .map(|(i, r)| (format!("{i:04}.radj"), formula::write_radjsat(r)))
                .collect(),
            _ => return Err(usage("exhaustive pools exist for qsat --n 1 and radjsat --n 1|2")),
        };
        for (name, text) in &files {
            write(&dir.join(name), text)?;
        }
        return Ok((json!({"kind": "pool", "dir": dir, "files": files.len()}), 0));
    }
    let mut rng = corpus::rng(a.seed.expect("clap enforces --seed"));
    if a.n == 0 {
        return Err(usage("--n must be positive"));
    }
    let (name, text) = match a.kind {
        GenKind::Qsat => ("qsat", formula::write_qsat(&corpus::random_qsat(&mut rng, a.n, a.clauses))),
        GenKind::Radjsat => ("radjsat", formula::write_radjsat(&corpus::random_radjsat(&mut rng, a.n, a.clauses, a.gamma))),
        GenKind::Kradjsat => {
            if a.k < 1 {
                return Err(usage("--k must be at least 1"));
            }
            let blocks = 2 * a.k - 1;
            let cs: Vec<Clause> = (0..a.clauses).map(|_| corpus::random_clause(&mut rng, blocks * a.n, 3)).collect();
            let inst = KStageRAdjSatInstance::contiguous(a.k, a.gamma, &vec![a.n; blocks as usize], cs)?;
            ("kradjsat", formula::write_kradjsat(&inst))
        }
        GenKind::ObjectiveUncertainty => ("objective-uncertainty", to_json(&lp::random_problem(&mut rng))),
    };
    match &a.out {
        Some(p) => {
            write(p, &text)?;
            Ok((json!({"kind": name, "path": p, "bytes": text.len()}), 0))
        }
        None => Ok((json!({"kind": name, "instance": text}), 0)),
    }
}

enum Input {
    QSat(formula::QSatInstance),
    KQSat(formula::KQSatInstance),
    RAdj(formula::RAdjSatInstance),
    KRAdj(KStageRAdjSatInstance),
    Graph(RobustGraphInstance),
    Mip(AffineRhsMip),
    Objective(ObjectiveUncertaintyProblem),
}

fn read_input(path: &Path) -> Result<Input, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(&text).map_err(Error::from)?;
        let parsed = if v.get("kind").is_some() {
            serde_json::from_value(v).map(Input::Graph)
        } else if v.get("A").is_some() {
            serde_json::from_value(v).map(Input::Mip)
        } else if v.get("first_stage").is_some() {
            serde_json::from_value(v).map(Input::Objective)
        } else {
            return Err(usage("unrecognized JSON instance"));
        };
        return Ok(parsed.map_err(Error::from)?);
    }
    let fmt = text
        .lines()
        .map(str::trim)
        .find(|l| l.starts_with("p "))
        .and_then(|l| l.split_whitespace().nth(1))
        .ok_or_else(|| usage("missing `p <format>` header"))?;
    Ok(match fmt {
        "qsat" => Input::QSat(formula::parse_qsat(&text)?),
        "kqsat" => Input::KQSat(formula::parse_kqsat(&text)?),
        "radjsat" => Input::RAdj(formula::parse_radjsat(&text)?),
        "kradjsat" => Input::KRAdj(formula::parse_kradjsat(&text)?),
        other => return Err(usage(format!("unknown format `{other}`"))),
    })
}

fn map_path(out: &Path) -> PathBuf {
    PathBuf::from(format!("{}.map.json", out.display()))
}

fn construction(t: Target) -> Option<Construction> {
    Some(match t {
        Target::TwoStageIs => Construction::TwoStageIs,
        Target::RecoverableIs => Construction::RecoverableIs,
        Target::TwoStageTsp => Construction::TwoStageTsp,
        Target::RecoverableTsp => Construction::RecoverableTsp,
        Target::TwoStageVc => Construction::TwoStageVc,
        Target::RecoverableVc => Construction::RecoverableVc,
        _ => return None,
    })
}

fn reduce(a: &ReduceArgs) -> Out {
    let input = read_input(&a.input)?;
    let (text, prov, summary) = match (input, a.to) {
        (Input::QSat(q), Target::Radjsat) => {
            let (r, p) = sat_reduce::reduce_qsat_to_radjsat(&q)?;
            let sizes = json!({"x": r.x.len(), "y": r.y.len(), "z": r.z.len(), "clauses": r.formula.clauses.len(), "gamma": r.gamma});
            (formula::write_radjsat(&r), to_json(&p), sizes)
        }
        (Input::KQSat(q), Target::Radjsat) => {
            let (r, p) = sat_reduce::reduce_kqsat_to_kradjsat(&q)?;
            let sizes = json!({"blocks": r.blocks.iter().map(Vec::len).collect::<Vec<_>>(), "clauses": r.formula.clauses.len(), "gamma": r.gamma});
            (formula::write_kradjsat(&r), to_json(&p), sizes)
        }
        (Input::RAdj(r), Target::AdjMip) => {
            let (mip, p) = adjmip::build_mip_with(&r, &MipOptions { target: a.attack.into(), epsilon: None })?;
            let sizes = json!({"rows": mip.rows(), "x": mip.x_domain.len(), "y": mip.y_domain.len(), "dim_zeta": mip.dim_zeta});
            (to_json(&mip), to_json(&p), sizes)
        }
        (Input::RAdj(r), t) if construction(t).is_some() => {
            let (inst, map) = graph_reduce::build(construction(t).unwrap(), &r, &a.gadget.options())?;
            let sizes = json!({
                "vertices": inst.graph.num_vertices,
                "edges": inst.graph.edges.len(),
                "threshold": rational::to_text(&map.threshold),
                "sense": map.sense,
            });
            (to_json(&inst), to_json(&map), sizes)
        }
        _ => return Err(usage("unsupported input/target pair")),
    };
    write(&a.out, &text)?;
    let mp = map_path(&a.out);
    write(&mp, &prov)?;
    Ok((json!({"out": a.out, "provenance": mp, "sizes": summary}), 0))
}

fn verdict(problem: &str, v: &qsolve::Verdict) -> Value {
    json!({"problem": problem, "answer": v.answer, "witness": v.witness_first_stage})
}

fn solve(a: &SolveArgs) -> Out {
    let v = match read_input(&a.input)? {
        Input::QSat(q) => verdict("qsat", &qsolve::solve_qsat(&q)?),
        Input::KQSat(q) => verdict("kqsat", &qsolve::solve_kqsat(&q)?),
        Input::RAdj(r) => verdict("radjsat", &qsolve::solve_radjsat(&r)?),
        Input::KRAdj(r) => verdict("kradjsat", &qsolve::solve_kstage(&r)?),
        Input::Graph(g) => match &a.map {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(Error::from)?;
                let map: GadgetMap = serde_json::from_str(&text).map_err(Error::from)?;
                let answer = graph_reduce::decide_reduced(&g, &map)?;
                json!({"problem": g.kind, "answer": answer, "threshold": rational::to_text(&map.threshold), "sense": map.sense})
            }
            None => {
                let r = match g.kind.stage() {
                    Stage::TwoStage => robopt::eval_two_stage(&g)?,
                    Stage::Recoverable => robopt::eval_recoverable(&g)?,
                    Stage::KStage => robopt::eval_kstage(&g)?,
                };
                json!({"problem": g.kind, "value": r.value, "witness": r.witness})
            }
        },
        Input::Mip(m) => match adjmip::check_adjustable_feasibility(&m) {
            Ok(v) => json!({"problem": "adj-mip", "method": "signatures", "feasible": v.feasible, "x": v.x.map(|x| x.iter().map(rational::to_text).collect::<Vec<_>>())}),
            Err(Error::Structure(why)) => {
                let Some(n) = a.samples else {
                    return Err(Fail(1, format!("structure precondition unmet: {why}; rerun with --samples")));
                };
                match adjmip::check_feasibility_sampled(&m, n, a.seed)? {
                    adjmip::Sampled::NoCounterexample { samples, .. } => {
                        json!({"problem": "adj-mip", "method": "sampled", "counterexample": null, "samples": samples})
                    }
                    adjmip::Sampled::Counterexample { refutations } => {
                        let z: Vec<String> = refutations[0].1.iter().map(rational::to_text).collect();
                        json!({"problem": "adj-mip", "method": "sampled", "feasible": false, "counterexample": z})
                    }
                }
            }
            Err(e) => return Err(e.into()),
        },
        Input::Objective(p) => {
            let direct = lp::rob_direct(&p)?;
            let mut v = json!({"problem": "objective-uncertainty", "value": rational::to_text(&direct)});
            if let Some(m) = a.m {
                v["kadapt"] = json!({"m": m, "value": rational::to_text(&lp::rob_kadapt(&p, m)?)});
            }
            v
        }
    };
    Ok((v, 0))
}

fn run_verify(a: &VerifyArgs) -> Out {
    let opts = VerifyOptions {
        graph: a.gadget.options(),
        mip_target: a.attack.into(),
    };
    let report = verify::run(a.theorem, &a.corpus, a.seed, &opts)?;
    let code = if report.ok() { 0 } else { 1 };
    Ok((serde_json::to_value(&report).expect("serializable"), code))
}

/// Prints to stdout, tolerating a closed pipe.
fn emit(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match &cli.cmd {
        Cmd::Gen(a) => gen(a),
        Cmd::Reduce(a) => reduce(a),
        Cmd::Solve(a) => solve(a),
        Cmd::Verify(a) => run_verify(a),
    };
    match out {
        Ok((v, code)) => {
            emit(&serde_json::to_string_pretty(&v).expect("serializable"));
            ExitCode::from(code)
        }
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            emit(&json!({"error": msg, "exit_code": code}).to_string());
            ExitCode::from(code)
        }
    }
}
