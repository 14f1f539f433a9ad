//! Exact evaluators by enumeration. Costs are scaled to a common
//! denominator and handled as checked `i128`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::feasible::feasible_masks;
use super::{items_mask, mask_items, ItemSet, RobValue, RobustGraphInstance, Stage};
use crate::qsolve::game::for_each_subset_upto;
use crate::rational::{common_denominator, ExtValue, Q};
use crate::{guard, Error, Result};

/// Dense per-mask tables up to this many items.
const DENSE_ITEMS: usize = 20;

struct Scaled {
    scale: BigInt,
    first: Vec<i128>,
    /// Per uncertain stage: nominal and deviation (c̄ − c̲).
    stages: Vec<(Vec<i128>, Vec<i128>)>,
}

fn scale_all(inst: &RobustGraphInstance) -> Result<Scaled> {
    let full = inst.full_costs();
    let stages = inst.uncertain_stages();
    let scale = common_denominator(
        full.first
            .iter()
            .chain(stages.iter().flat_map(|(n, d)| n.iter().chain(d.iter()))),
    );
    let conv = |v: &Q| -> Result<i128> {
        let s = v * Q::from_integer(scale.clone());
        s.to_integer().to_i128().filter(|x| x.abs() < 1 << 100).ok_or(Error::Overflow)
    };
    let first = full.first.iter().map(conv).collect::<Result<Vec<_>>>()?;
    let stages = stages
        .iter()
        .map(|(n, d)| {
            let nom = n.iter().map(conv).collect::<Result<Vec<_>>>()?;
            let dev = d
                .iter()
                .zip(&nom)
                .map(|(x, nv)| Ok(conv(x)? - nv))
                .collect::<Result<Vec<_>>>()?;
            Ok((nom, dev))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Scaled {
        scale,
        first,
        stages,
    })
}

fn unscale(v: i128, scale: &BigInt) -> Q {
    Q::new(BigInt::from(v), scale.clone())
}

fn cost_of(c: &[i128], m: ItemSet) -> i128 {
    let mut s = 0;
    let mut m = m;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        s += c[i];
        m &= m - 1;
    }
    s
}

/// Orientation helpers: `better` is the player's preference, `worse` the
/// adversary's.
#[derive(Clone, Copy)]
struct Sense {
    max: bool,
}

impl Sense {
    fn better(self, a: i128, b: i128) -> bool {
        if self.max {
            a > b
        } else {
            a < b
        }
    }
    fn pick_better(self, a: i128, b: i128) -> i128 {
        if self.better(b, a) {
            b
        } else {
            a
        }
    }
    fn pick_worse(self, a: i128, b: i128) -> i128 {
        if self.better(b, a) {
            a
        } else {
            b
        }
    }
    fn infeasible(self) -> ExtValue {
        if self.max {
            ExtValue::NegInf
        } else {
            ExtValue::PosInf
        }
    }
}

fn scenario_costs(nom: &[i128], dev: &[i128], scen: &[usize]) -> Vec<i128> {
    let mut c = nom.to_vec();
    for &i in scen {
        c[i] += dev[i];
    }
    c
}

fn scenarios(dev: &[i128], gamma: u32) -> Vec<Vec<usize>> {
    let items: Vec<usize> = (0..dev.len()).filter(|&i| dev[i] != 0).collect();
    let mut out = Vec::new();
    for_each_subset_upto(&items, gamma as usize, |s| {
        out.push(s.to_vec());
        true
    });
    out
}

/// For every x ⊆ some feasible set: worst over scenarios of
/// best_{f ⊇ x, f feasible} c(f∖x).
fn second_stage_table(
    m: usize,
    feas: &[ItemSet],
    nom: &[i128],
    dev: &[i128],
    scen: &[Vec<usize>],
    sense: Sense,
) -> HashMap<ItemSet, i128> {
    let per_scenario = |s: &Vec<usize>| -> HashMap<ItemSet, i128> {
        let c = scenario_costs(nom, dev, s);
        if m <= DENSE_ITEMS {
            let size = 1usize << m;
            let mut best: Vec<Option<i128>> = vec![None; size];
            for &f in feas {
                best[f as usize] = Some(cost_of(&c, f));
            }
            for bit in 0..m {
                for x in 0..size {
                    if x >> bit & 1 == 0 {
                        if let Some(b) = best[x | 1 << bit] {
                            best[x] = Some(best[x].map_or(b, |a| sense.pick_better(a, b)));
                        }
                    }
                }
            }
            best.iter()
                .enumerate()
                .filter_map(|(x, b)| b.map(|b| (x as ItemSet, b - cost_of(&c, x as ItemSet))))
                .collect()
        } else {
            let mut best: HashMap<ItemSet, i128> = HashMap::new();
            for &f in feas {
                let cf = cost_of(&c, f);
                let mut sub = f;
                loop {
                    let v = cf - cost_of(&c, sub);
                    best.entry(sub)
                        .and_modify(|a| *a = sense.pick_better(*a, v))
                        .or_insert(v);
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & f;
                }
            }
            best
        }
    };
    let tables: Vec<HashMap<ItemSet, i128>> = scen.par_iter().map(per_scenario).collect();
    let mut it = tables.into_iter();
    let mut acc = it.next().unwrap_or_default();
    for t in it {
        for (x, v) in acc.iter_mut() {
            *v = sense.pick_worse(*v, t[x]);
        }
    }
    acc
}

fn work_estimate(m: usize, feas: &[ItemSet], scen: usize) -> u128 {
    let per = if m <= DENSE_ITEMS {
        (m as u128 + 1) << m
    } else {
        feas.iter().map(|f| guard::pow2(f.count_ones() as usize)).sum()
    };
    per.saturating_mul(scen as u128)
}

fn check_kind(inst: &RobustGraphInstance, want: Stage) -> Result<()> {
    inst.validate()?;
    if inst.kind.stage() != want {
        return Err(Error::invalid(format!("{:?} is not a {want:?} kind", inst.kind)));
    }
    Ok(())
}

/// best over first stages x of C·x + worst_c best_{y : x+y feasible} c·y,
/// with max ∅ = −∞ (IS) and min ∅ = +∞ (TSP, VC).
pub fn eval_two_stage(inst: &RobustGraphInstance) -> Result<RobValue> {
    check_kind(inst, Stage::TwoStage)?;
    two_stage(inst)
}

fn two_stage(inst: &RobustGraphInstance) -> Result<RobValue> {
    let m = inst.item_count();
    let sense = Sense {
        max: inst.kind.maximize(),
    };
    let sc = scale_all(inst)?;
    let feas = feasible_masks(inst)?;
    let (nom, dev) = &sc.stages[0];
    let scen = scenarios(dev, inst.gamma());
    guard::check("two-stage evaluation", work_estimate(m, &feas, scen.len()))?;
    let table = second_stage_table(m, &feas, nom, dev, &scen, sense);
    let mut best: Option<(i128, ItemSet)> = None;
    for (&x, &w) in &table {
        let v = cost_of(&sc.first, x) + w;
        let take = match best {
            None => true,
            Some((b, bx)) => sense.better(v, b) || (v == b && x < bx),
        };
        if take {
            best = Some((v, x));
        }
    }
    Ok(match best {
        None => RobValue {
            value: sense.infeasible(),
            witness: None,
        },
        Some((v, x)) => RobValue {
            value: ExtValue::Finite(unscale(v, &sc.scale)),
            witness: Some(mask_items(x)),
        },
    })
}

/// Value of one fixed first stage, re-derived by plain enumeration of every
/// scenario and every feasible completion (no restriction to deviating
/// items, no dynamic programming).
pub fn first_stage_value(inst: &RobustGraphInstance, first: &[usize]) -> Result<ExtValue> {
    inst.validate()?;
    let sense = Sense {
        max: inst.kind.maximize(),
    };
    let sc = scale_all(inst)?;
    let feas = feasible_masks(inst)?;
    let (nom, dev) = &sc.stages[0];
    let m = inst.item_count();
    let x = items_mask(first);
    let all: Vec<usize> = (0..m).collect();
    let k = inst.k_recover.unwrap_or(0);
    let recoverable = inst.kind.stage() == Stage::Recoverable;
    if recoverable && !feas.contains(&x) {
        return Ok(sense.infeasible());
    }
    guard::check(
        "first-stage replay",
        guard::subsets_up_to(m, inst.gamma() as usize).saturating_mul(feas.len() as u128),
    )?;
    let mut worst: Option<Option<i128>> = None;
    for_each_subset_upto(&all, inst.gamma() as usize, |s| {
        let c = scenario_costs(nom, dev, s);
        let mut best: Option<i128> = None;
        for &f in &feas {
            let v = if recoverable {
                if (f ^ x).count_ones() > k {
                    continue;
                }
                cost_of(&c, f)
            } else {
                if f & x != x {
                    continue;
                }
                cost_of(&c, f & !x)
            };
            best = Some(best.map_or(v, |b| sense.pick_better(b, v)));
        }
        worst = Some(match (worst.take(), best) {
            (None, b) => b,
            (Some(None), _) | (Some(_), None) => None,
            (Some(Some(a)), Some(b)) => Some(sense.pick_worse(a, b)),
        });
        true
    });
    Ok(match worst.flatten() {
        None => sense.infeasible(),
        Some(w) => ExtValue::Finite(unscale(cost_of(&sc.first, x) + w, &sc.scale)),
    })
}

/// Deterministic two-stage optimum: every item of a feasible set is bought
/// in whichever stage is cheaper under nominal costs.
pub fn eval_nominal_two_stage(inst: &RobustGraphInstance) -> Result<ExtValue> {
    inst.validate()?;
    let sense = Sense {
        max: inst.kind.maximize(),
    };
    let sc = scale_all(inst)?;
    let nom = &sc.stages[0].0;
    let per_item: Vec<i128> = (0..nom.len())
        .map(|i| sense.pick_better(sc.first[i], nom[i]))
        .collect();
    let best = feasible_masks(inst)?
        .into_iter()
        .map(|f| cost_of(&per_item, f))
        .reduce(|a, b| sense.pick_better(a, b));
    Ok(match best {
        None => sense.infeasible(),
        Some(v) => ExtValue::Finite(unscale(v, &sc.scale)),
    })
}

/// best over feasible x of C·x + worst_c best_{y feasible, |x Δ y| ≤ k} c·y.
pub fn eval_recoverable(inst: &RobustGraphInstance) -> Result<RobValue> {
    check_kind(inst, Stage::Recoverable)?;
    let k = inst.k_recover.expect("validated");
    let sense = Sense {
        max: inst.kind.maximize(),
    };
    let sc = scale_all(inst)?;
    let feas = feasible_masks(inst)?;
    let (nom, dev) = &sc.stages[0];
    let scen = scenarios(dev, inst.gamma());
    let pairs = (feas.len() as u128).saturating_mul(feas.len() as u128);
    guard::check("recoverable evaluation", pairs.saturating_mul(scen.len() as u128))?;
    let near: Vec<Vec<usize>> = feas
        .par_iter()
        .map(|&x| {
            (0..feas.len())
                .filter(|&j| (feas[j] ^ x).count_ones() <= k)
                .collect()
        })
        .collect();
    let worst: Vec<i128> = (0..feas.len())
        .into_par_iter()
        .map(|xi| {
            let mut w: Option<i128> = None;
            for s in &scen {
                let c = scenario_costs(nom, dev, s);
                let b = near[xi]
                    .iter()
                    .map(|&j| cost_of(&c, feas[j]))
                    .reduce(|a, b| sense.pick_better(a, b))
                    .expect("x is within distance 0 of itself");
                w = Some(w.map_or(b, |a| sense.pick_worse(a, b)));
            }
            w.expect("at least the empty scenario")
        })
        .collect();
    let mut best: Option<(i128, ItemSet)> = None;
    for (xi, &x) in feas.iter().enumerate() {
        let v = cost_of(&sc.first, x) + worst[xi];
        let take = match best {
            None => true,
            Some((b, bx)) => sense.better(v, b) || (v == b && x < bx),
        };
        if take {
            best = Some((v, x));
        }
    }
    Ok(match best {
        None => RobValue {
            value: sense.infeasible(),
            witness: None,
        },
        Some((v, x)) => RobValue {
            value: ExtValue::Finite(unscale(v, &sc.scale)),
            witness: Some(mask_items(x)),
        },
    })
}

struct KStage<'a> {
    sc: &'a Scaled,
    gammas: Vec<u32>,
    feasible: &'a std::collections::HashSet<ItemSet>,
    extendable: &'a std::collections::HashSet<ItemSet>,
    all: ItemSet,
    sense: Sense,
    memo: HashMap<(usize, ItemSet), Option<i128>>,
}

impl KStage<'_> {
    /// Value-to-go before the adversary of stage `i` moves, given the items
    /// already bought; `None` is the infeasible sentinel.
    fn value(&mut self, i: usize, used: ItemSet) -> Option<i128> {
        let k = self.sc.stages.len() + 1;
        if i == k {
            return self.feasible.contains(&used).then_some(0);
        }
        if let Some(v) = self.memo.get(&(i, used)) {
            return *v;
        }
        let (nom, dev) = &self.sc.stages[i - 1];
        let scen = scenarios(dev, self.gammas[i - 1]);
        let free = self.all & !used;
        let mut worst: Option<Option<i128>> = None;
        for s in &scen {
            let c = scenario_costs(nom, dev, s);
            let mut best: Option<i128> = None;
            let mut sub = free;
            loop {
                if self.extendable.contains(&(used | sub)) {
                    if let Some(rest) = self.value(i + 1, used | sub) {
                        let v = cost_of(&c, sub) + rest;
                        best = Some(best.map_or(v, |b| self.sense.pick_better(b, v)));
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & free;
            }
            worst = Some(match (worst.take(), best) {
                (None, b) => b,
                (Some(None), _) | (Some(_), None) => None,
                (Some(Some(a)), Some(b)) => Some(self.sense.pick_worse(a, b)),
            });
            if worst == Some(None) {
                break;
            }
        }
        let v = worst.flatten();
        self.memo.insert((i, used), v);
        v
    }
}

pub const KSTAGE_MAX_ITEMS: usize = 12;

/// Nested min–max–…–min over K ≤ 4 stages with Σᵢ x⁽ⁱ⁾ feasible.
pub fn eval_kstage(inst: &RobustGraphInstance) -> Result<RobValue> {
    check_kind(inst, Stage::KStage)?;
    let m = inst.item_count();
    if m > KSTAGE_MAX_ITEMS {
        return Err(Error::TooLarge {
            what: "k-stage evaluation (items)",
            needed: m as u128,
            limit: KSTAGE_MAX_ITEMS as u128,
        });
    }
    let k = inst.stages();
    guard::check("k-stage evaluation", guard::pow2(m).saturating_mul(k as u128 + 1).pow(2))?;
    let sense = Sense {
        max: inst.kind.maximize(),
    };
    let sc = scale_all(inst)?;
    let feas = feasible_masks(inst)?;
    let feasible: std::collections::HashSet<ItemSet> = feas.iter().copied().collect();
    let mut extendable = std::collections::HashSet::new();
    for &f in &feas {
        let mut sub = f;
        loop {
            extendable.insert(sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & f;
        }
    }
    let mut game = KStage {
        sc: &sc,
        gammas: (1..k).map(|i| inst.stage_gamma(i)).collect(),
        feasible: &feasible,
        extendable: &extendable,
        all: if m == 128 { u128::MAX } else { (1u128 << m) - 1 },
        sense,
        memo: HashMap::new(),
    };
    let mut best: Option<(i128, ItemSet)> = None;
    let mut xs: Vec<ItemSet> = extendable.iter().copied().collect();
    xs.sort_unstable();
    for x in xs {
        if let Some(rest) = game.value(1, x) {
            let v = cost_of(&sc.first, x) + rest;
            if best.is_none_or(|(b, _)| sense.better(v, b)) {
                best = Some((v, x));
            }
        }
    }
    Ok(match best {
        None => RobValue {
            value: sense.infeasible(),
            witness: None,
        },
        Some((v, x)) => RobValue {
            value: ExtValue::Finite(unscale(v, &sc.scale)),
            witness: Some(mask_items(x)),
        },
    })
}
