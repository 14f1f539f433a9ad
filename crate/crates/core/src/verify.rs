//! Source-oracle vs reduced-oracle checks over instance corpora.
//!
//! Each check reduces a source instance (or reads a prebuilt reduction from
//! a `<file>.reduced` sibling), decides both sides exactly and reports every
//! disagreement. Instances run in parallel but results are collected in
//! corpus order, so reports do not depend on the worker count.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::adjmip::{build_mip_with, check_adjustable_feasibility, AffineRhsMip, AttackTarget, MipOptions};
use crate::formula::{self, KQSatInstance, QSatInstance, RAdjSatInstance};
use crate::graph_reduce::{self, decide_reduced, Construction, GadgetMap, Options};
use crate::lp::{random_problem, rob_direct, rob_kadapt, ObjectiveUncertaintyProblem};
use crate::qsolve::{solve_kqsat, solve_kstage, solve_qsat, solve_radjsat};
use crate::rational;
use crate::robopt::RobustGraphInstance;
use crate::sat_reduce::{reduce_kqsat_to_kradjsat, reduce_qsat_to_radjsat};
use crate::{corpus, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    /// ∃∀∃-SAT → R-Adj-SAT.
    T2,
    /// k-stage prenex SAT → k-stage R-Adj-SAT (k = 3).
    T3,
    /// R-Adj-SAT → adjustable MIP.
    T5,
    /// Two-stage independent set.
    T6,
    /// Recoverable independent set.
    T7,
    /// Two-stage TSP.
    T8,
    /// Recoverable TSP.
    T9,
    /// Two-stage and recoverable vertex cover.
    T10,
    /// Full recourse vs n+1 candidates.
    KAdapt,
}

impl Theorem {
    pub const ALL: [Theorem; 9] = [
        Theorem::T2,
        Theorem::T3,
        Theorem::T5,
        Theorem::T6,
        Theorem::T7,
        Theorem::T8,
        Theorem::T9,
        Theorem::T10,
        Theorem::KAdapt,
    ];

    fn source_ext(self) -> &'static str {
        match self {
            Theorem::T2 => "qsat",
            Theorem::T3 => "kqsat",
            Theorem::KAdapt => "json",
            _ => "radj",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        let s = match self {
            Theorem::T2 => "2",
            Theorem::T3 => "3",
            Theorem::T5 => "5",
            Theorem::T6 => "6",
            Theorem::T7 => "7",
            Theorem::T8 => "8",
            Theorem::T9 => "9",
            Theorem::T10 => "10",
            Theorem::KAdapt => "K-adapt",
        };
        f.write_str(s)
    }
}

impl FromStr for Theorem {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.to_string().eq_ignore_ascii_case(s) || (s.eq_ignore_ascii_case("kadapt") && *t == Theorem::KAdapt))
            .ok_or_else(|| format!("unknown theorem `{s}` (expected 2, 3, 5, 6, 7, 8, 9, 10 or K-adapt)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Corpus {
    ExhaustiveN1,
    ExhaustiveN2,
    Random(usize),
    /// Source files in a directory, with optional `.reduced` siblings.
    Dir(PathBuf),
}

impl fmt::Display for Corpus {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            Corpus::ExhaustiveN1 => f.write_str("exhaustive-n1"),
            Corpus::ExhaustiveN2 => f.write_str("exhaustive-n2"),
            Corpus::Random(n) => write!(f, "random-{n}"),
            Corpus::Dir(p) => write!(f, "{}", p.display()),
        }
    }
}

impl FromStr for Corpus {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exhaustive-n1" => Ok(Corpus::ExhaustiveN1),
            "exhaustive-n2" => Ok(Corpus::ExhaustiveN2),
            _ => {
                if let Some(n) = s.strip_prefix("random-") {
                    return n.parse().map(Corpus::Random).map_err(|_| format!("bad corpus size in `{s}`"));
                }
                let p = PathBuf::from(s);
                if p.is_dir() {
                    Ok(Corpus::Dir(p))
                } else {
                    Err(format!("unknown corpus `{s}` (exhaustive-n1, exhaustive-n2, random-<N> or a directory)"))
                }
            }
        }
    }
}

/// Knobs for the graph constructions and the MIP attack block.
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub graph: Options,
    pub mip_target: AttackTarget,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            graph: Options::default(),
            mip_target: AttackTarget::Y,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub index: usize,
    pub name: String,
    pub source: String,
    pub reduced: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub theorem: String,
    pub corpus: String,
    pub seed: u64,
    pub checked: usize,
    /// Instances whose source answer is yes (or, for K-adapt, whose
    /// single-candidate value is strictly worse).
    pub yes: usize,
    pub mismatches: Vec<Mismatch>,
    pub wall_ms: u128,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

enum Source {
    QSat(QSatInstance),
    KQSat(KQSatInstance),
    RAdj(RAdjSatInstance),
    Objective(ObjectiveUncertaintyProblem),
}

struct Item {
    name: String,
    source: Source,
    /// Prebuilt reduction file, if the corpus provides one.
    reduced: Option<PathBuf>,
}

fn unavailable(t: Theorem, c: &Corpus) -> Error {
    Error::invalid(format!("corpus {c} is not defined for theorem {t}"))
}

fn generated(t: Theorem, c: &Corpus, seed: u64) -> Result<Vec<Source>> {
    let mut rng = corpus::rng(seed);
    let out = match (t, c) {
        (Theorem::T2, Corpus::ExhaustiveN1) => corpus::exhaustive_qsat_n1(2).into_iter().map(Source::QSat).collect(),
        (Theorem::T2, Corpus::Random(n)) => (0..*n).map(|i| Source::QSat(corpus::random_qsat(&mut rng, 2, 1 + i % 3))).collect(),
        (Theorem::T3, Corpus::Random(n)) => (0..*n).map(|i| Source::KQSat(corpus::random_kqsat(&mut rng, 3, 1, 2 + i % 4))).collect(),
        (Theorem::T5, Corpus::ExhaustiveN2) => corpus::exhaustive_radjsat_n2().into_iter().map(Source::RAdj).collect(),
        (Theorem::T5, Corpus::Random(n)) => (0..*n)
            .map(|i| Source::RAdj(corpus::random_radjsat(&mut rng, 3, 3 + i % 28, 1 + (i % 2) as u32)))
            .collect(),
        (Theorem::KAdapt, Corpus::Random(n)) => (0..*n).map(|_| Source::Objective(random_problem(&mut rng))).collect(),
        (Theorem::T6 | Theorem::T7 | Theorem::T8 | Theorem::T9 | Theorem::T10, c) => match c {
            Corpus::ExhaustiveN1 => corpus::exhaustive_radjsat_n1().into_iter().map(Source::RAdj).collect(),
            Corpus::ExhaustiveN2 => corpus::exhaustive_radjsat_n2().into_iter().map(Source::RAdj).collect(),
            Corpus::Random(n) => (0..*n)
                .map(|i| Source::RAdj(corpus::random_radjsat(&mut rng, 2, 2 + i % 29, (i % 2) as u32)))
                .collect(),
            Corpus::Dir(_) => unreachable!(),
        },
        _ => return Err(unavailable(t, c)),
    };
    Ok(out)
}

fn read_source(t: Theorem, path: &Path) -> Result<Source> {
    let text = std::fs::read_to_string(path)?;
    Ok(match t {
        Theorem::T2 => Source::QSat(formula::parse_qsat(&text)?),
        Theorem::T3 => Source::KQSat(formula::parse_kqsat(&text)?),
        Theorem::KAdapt => Source::Objective(serde_json::from_str(&text)?),
        _ => Source::RAdj(formula::parse_radjsat(&text)?),
    })
}

fn items(t: Theorem, c: &Corpus, seed: u64) -> Result<Vec<Item>> {
    let Corpus::Dir(dir) = c else {
        return Ok(generated(t, c, seed)?
            .into_iter()
            .enumerate()
            .map(|(i, source)| Item { name: format!("#{i}"), source, reduced: None })
            .collect());
    };
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == t.source_ext()))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let reduced = PathBuf::from(format!("{}.reduced", p.display()));
            Ok(Item {
                name: p.file_name().unwrap().to_string_lossy().into_owned(),
                source: read_source(t, &p)?,
                reduced: reduced.is_file().then_some(reduced),
            })
        })
        .collect()
}

fn graph_constructions(t: Theorem) -> &'static [Construction] {
    match t {
        Theorem::T6 => &[Construction::TwoStageIs],
        Theorem::T7 => &[Construction::RecoverableIs],
        Theorem::T8 => &[Construction::TwoStageTsp],
        Theorem::T9 => &[Construction::RecoverableTsp],
        _ => &[Construction::TwoStageVc, Construction::RecoverableVc],
    }
}

fn read_graph(path: &Path) -> Result<(RobustGraphInstance, GadgetMap)> {
    let inst: RobustGraphInstance = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let map_path = format!("{}.map.json", path.display());
    let map: GadgetMap = serde_json::from_str(&std::fs::read_to_string(map_path)?)?;
    Ok((inst, map))
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

/// (source answer, reduced answer) rendered for the report.
fn check_one(t: Theorem, item: &Item, opts: &VerifyOptions) -> Result<(bool, String, String)> {
    let reduced_text = |r: Result<bool>| -> Result<String> {
        match r {
            Ok(b) => Ok(yes_no(b)),
            Err(e @ Error::TooLarge { .. }) => Err(e),
            Err(e) => Ok(format!("error: {e}")),
        }
    };
    match (&item.source, t) {
        (Source::QSat(src), Theorem::T2) => {
            let want = solve_qsat(src)?.answer;
            let target = match &item.reduced {
                Some(p) => formula::parse_radjsat(&std::fs::read_to_string(p)?)?,
                None => reduce_qsat_to_radjsat(src)?.0,
            };
            Ok((want, yes_no(want), reduced_text(solve_radjsat(&target).map(|v| v.answer))?))
        }
        (Source::KQSat(src), Theorem::T3) => {
            let want = solve_kqsat(src)?.answer;
            let target = match &item.reduced {
                Some(p) => formula::parse_kradjsat(&std::fs::read_to_string(p)?)?,
                None => reduce_kqsat_to_kradjsat(src)?.0,
            };
            Ok((want, yes_no(want), reduced_text(solve_kstage(&target).map(|v| v.answer))?))
        }
        (Source::RAdj(src), Theorem::T5) => {
            let want = solve_radjsat(src)?.answer;
            let mip: AffineRhsMip = match &item.reduced {
                Some(p) => serde_json::from_str(&std::fs::read_to_string(p)?)?,
                None => build_mip_with(src, &MipOptions { target: opts.mip_target, epsilon: None })?.0,
            };
            Ok((want, yes_no(want), reduced_text(check_adjustable_feasibility(&mip).map(|v| v.feasible))?))
        }
        (Source::RAdj(src), _) => {
            let want = solve_radjsat(src)?.answer;
            let mut got = Vec::new();
            match &item.reduced {
                Some(p) => {
                    let (inst, map) = read_graph(p)?;
                    got.push(reduced_text(decide_reduced(&inst, &map))?);
                }
                None => {
                    for &c in graph_constructions(t) {
                        let r = graph_reduce::build(c, src, &opts.graph).and_then(|(inst, map)| decide_reduced(&inst, &map));
                        got.push(reduced_text(r)?);
                    }
                }
            }
            let want_text = yes_no(want);
            let reduced = if got.iter().all(|g| *g == want_text) { want_text.clone() } else { got.join(", ") };
            Ok((want, want_text, reduced))
        }
        (Source::Objective(p), Theorem::KAdapt) => {
            let direct = rob_direct(p)?;
            let k = rob_kadapt(p, p.dim() + 1)?;
            let single = rob_kadapt(p, 1)?;
            Ok((single > direct, rational::to_text(&direct), rational::to_text(&k)))
        }
        _ => Err(Error::invalid(format!("theorem {t} does not apply to this source"))),
    }
}

pub fn run(theorem: Theorem, corpus: &Corpus, seed: u64, opts: &VerifyOptions) -> Result<Report> {
    let start = Instant::now();
    let items = items(theorem, corpus, seed)?;
    let results: Vec<(bool, String, String)> = items.par_iter().map(|it| check_one(theorem, it, opts)).collect::<Result<_>>()?;
    let mismatches = results
        .iter()
        .zip(&items)
        .enumerate()
        .filter(|(_, ((_, s, r), _))| s != r)
        .map(|(index, ((_, s, r), it))| Mismatch {
            index,
            name: it.name.clone(),
            source: s.clone(),
            reduced: r.clone(),
        })
        .collect();
    Ok(Report {
        theorem: theorem.to_string(),
        corpus: corpus.to_string(),
        seed,
        checked: items.len(),
        yes: results.iter().filter(|r| r.0).count(),
        mismatches,
        wall_ms: start.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for t in Theorem::ALL {
            assert_eq!(t.to_string().parse::<Theorem>().unwrap(), t);
        }
        assert_eq!("kadapt".parse::<Theorem>().unwrap(), Theorem::KAdapt);
        assert!("4".parse::<Theorem>().is_err());
        assert_eq!("random-100".parse::<Corpus>().unwrap(), Corpus::Random(100));
        assert!("random-x".parse::<Corpus>().is_err());
    }

    #[test]
    fn small_runs_agree() {
        let o = VerifyOptions::default();
        assert!(run(Theorem::T2, &Corpus::Random(10), 1, &o).unwrap().ok());
        assert!(run(Theorem::KAdapt, &Corpus::Random(10), 11, &o).unwrap().ok());
        assert!(run(Theorem::T3, &Corpus::ExhaustiveN1, 1, &o).is_err());
    }
}
