//! Threshold deciders that only enumerate the strategies the gadget proofs
//! leave open: one side per X gadget, adversary subsets of V₂ / E₂, and
//! per-gadget completions solved exactly.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::hamilton::Hamilton;
use super::mwis::mwis;
use super::{Construction, GadgetMap, Role};
use crate::qsolve::game::for_each_subset_upto;
use crate::rational::{common_denominator, ExtValue, Q};
use crate::robopt::{ProblemKind, RobustGraphInstance};
use crate::{guard, Error, Result};

/// Does the reduced instance meet the threshold recorded in `map`?
pub fn decide_reduced(inst: &RobustGraphInstance, map: &GadgetMap) -> Result<bool> {
    check_map(inst, map)?;
    match map.construction {
        Construction::TwoStageIs | Construction::TwoStageVc | Construction::RecoverableVc => {
            Ok(map.meets(&structured_value(inst, map)?))
        }
        Construction::RecoverableIs => recoverable_is(inst, map),
        Construction::TwoStageTsp | Construction::RecoverableTsp => tsp(inst, map),
    }
}

/// Exact robust value for two-stage IS / VC. For recoverable VC this is the
/// best value over first stages taking exactly one side of every blow-up
/// gadget, which `decide_reduced` shows is enough near the threshold.
pub fn structured_value(inst: &RobustGraphInstance, map: &GadgetMap) -> Result<ExtValue> {
    check_map(inst, map)?;
    let s = Scaled::new(inst)?;
    let v = match map.construction {
        Construction::TwoStageIs => two_stage_is(inst, map, &s)?,
        Construction::TwoStageVc => two_stage_vc(inst, map, &s)?,
        Construction::RecoverableVc => recoverable_vc(inst, map, &s)?.0,
        c => {
            return Err(Error::Precondition(format!(
                "no structured value for {c:?}; use decide_reduced"
            )))
        }
    };
    Ok(ExtValue::Finite(s.unscale(v)))
}

fn expected_kind(c: Construction) -> ProblemKind {
    match c {
        Construction::TwoStageIs => ProblemKind::TwoStageIs,
        Construction::RecoverableIs => ProblemKind::RecoverableIs,
        Construction::TwoStageTsp => ProblemKind::TwoStageTsp,
        Construction::RecoverableTsp => ProblemKind::RecoverableTsp,
        Construction::TwoStageVc => ProblemKind::TwoStageVc,
        Construction::RecoverableVc => ProblemKind::RecoverableVc,
    }
}

fn check_map(inst: &RobustGraphInstance, map: &GadgetMap) -> Result<()> {
    let bad = |m: &str| Err(Error::InconsistentMap(m.to_string()));
    if inst.kind != expected_kind(map.construction) {
        return bad("instance kind does not match the construction");
    }
    if inst.gamma() != map.gamma {
        return bad("budget differs from the map");
    }
    let support = inst.costs.len();
    map.check_partition(support)?;
    // adversary locality
    let adv = map.items_with(Role::Adversary);
    if inst.default_cost.as_ref().is_some_and(|d| d.nominal != d.deviated) {
        return bad("off-support edges can deviate");
    }
    if deviating(inst).iter().any(|i| adv.binary_search(i).is_err()) {
        return bad("an item outside V₂/E₂ can deviate");
    }
    if matches!(map.construction, Construction::RecoverableIs | Construction::RecoverableVc) {
        for &x in &map.x {
            if map.special_for(Role::BlowupLeft, x).is_none() || map.special_for(Role::BlowupRight, x).is_none() {
                return bad("missing blow-up sides");
            }
        }
    }
    Ok(())
}

/// Costs times a common denominator.
struct Scaled {
    scale: BigInt,
    first: Vec<i128>,
    nom: Vec<i128>,
    dev: Vec<i128>,
}

impl Scaled {
    fn new(inst: &RobustGraphInstance) -> Result<Self> {
        let c = &inst.costs;
        let scale = common_denominator(c.first.iter().chain(&c.nominal).chain(&c.deviated));
        let conv = |v: &[Q]| -> Result<Vec<i128>> {
            v.iter()
                .map(|x| {
                    (x * Q::from_integer(scale.clone()))
                        .to_integer()
                        .to_i128()
                        .filter(|v| v.abs() < 1 << 100)
                        .ok_or_else(|| Error::invalid("cost too large for exact integer evaluation"))
                })
                .collect()
        };
        Ok(Scaled {
            first: conv(&c.first)?,
            nom: conv(&c.nominal)?,
            dev: conv(&c.deviated)?,
            scale,
        })
    }

    fn unscale(&self, v: i128) -> Q {
        Q::new(BigInt::from(v), self.scale.clone())
    }

    fn second(&self, attacked: &[usize]) -> Vec<i128> {
        let mut w = self.nom.clone();
        for &i in attacked {
            w[i] = self.dev[i];
        }
        w
    }
}

/// Support items with c̲ ≠ c̄ (off-support TSP edges are checked not to
/// deviate, and expanding them would cost |V|² records).
fn deviating(inst: &RobustGraphInstance) -> Vec<usize> {
    let c = &inst.costs;
    (0..c.len()).filter(|&i| c.nominal[i] != c.deviated[i]).collect()
}

/// Every attack: subsets of the deviating items with at most Γ elements.
fn attacks(inst: &RobustGraphInstance) -> Result<Vec<Vec<usize>>> {
    let dev = deviating(inst);
    let g = inst.gamma() as usize;
    guard::check("adversary subsets", guard::subsets_up_to(dev.len(), g))?;
    let mut out = Vec::new();
    for_each_subset_upto(&dev, g, |s| {
        out.push(s.to_vec());
        true
    });
    Ok(out)
}

fn mask(items: &[usize]) -> u128 {
    items.iter().fold(0, |m, &i| m | 1 << i)
}

fn bits(m: u128) -> impl Iterator<Item = usize> {
    (0..128).filter(move |i| m >> i & 1 == 1)
}

fn sum(w: &[i128], m: u128) -> i128 {
    bits(m).map(|i| w[i]).sum()
}

fn nonneg(w: &[i128]) -> Vec<i128> {
    w.iter().map(|&v| v.max(0)).collect()
}

fn small_graph(inst: &RobustGraphInstance) -> Result<(Vec<u128>, u128)> {
    let n = inst.graph.num_vertices;
    if n > 128 {
        return Err(Error::TooLarge { what: "structured decider (vertices)", needed: n as u128, limit: 128 });
    }
    Ok((inst.graph.adjacency(), guard::pow2(n).wrapping_sub(1)))
}

/// max over independent x ⊆ V₁ of C·x + min_A MWIS(G − N[x], c_A).
/// Exact when buying outside V₁ never beats waiting: C_v ≤ min(c̲_v, c̄_v).
fn two_stage_is(inst: &RobustGraphInstance, map: &GadgetMap, s: &Scaled) -> Result<i128> {
    let (adj, all) = small_graph(inst)?;
    let v1 = mask(&map.items_with(Role::FirstStage));
    if bits(all & !v1).any(|v| s.first[v] > s.nom[v].min(s.dev[v])) {
        return Err(Error::Precondition("a vertex outside V₁ is cheaper to buy early".into()));
    }
    let atk = attacks(inst)?;
    guard::check("structured first stages", guard::pow2(v1.count_ones() as usize).saturating_mul(atk.len() as u128))?;
    let weights: Vec<Vec<i128>> = atk.iter().map(|a| nonneg(&s.second(a))).collect();
    let mut best = i128::MIN;
    let v1_items: Vec<usize> = bits(v1).collect();
    for_each_subset_upto(&v1_items, v1_items.len(), |xs| {
        let x = mask(xs);
        if xs.iter().any(|&v| adj[v] & x != 0) {
            return true;
        }
        let closed = xs.iter().fold(x, |m, &v| m | adj[v]);
        let cand = all & !closed;
        let worst = weights.par_iter().map(|w| mwis(&adj, w, cand).0).min().unwrap_or(0);
        best = best.max(sum(&s.first, x) + worst);
        true
    });
    Ok(best)
}

/// min over x ⊆ V₁ of C·x + max_A [c_A(V∖x) − MWIS_{c_A}(G − x)].
/// Exact when C_v ≥ max(c̲_v, c̄_v) outside V₁.
fn two_stage_vc(inst: &RobustGraphInstance, map: &GadgetMap, s: &Scaled) -> Result<i128> {
    let (adj, all) = small_graph(inst)?;
    let v1 = mask(&map.items_with(Role::FirstStage));
    if bits(all & !v1).any(|v| s.first[v] < s.nom[v].max(s.dev[v])) {
        return Err(Error::Precondition("a vertex outside V₁ is cheaper to buy early".into()));
    }
    if s.nom.iter().any(|&v| v < 0) {
        return Err(Error::Precondition("negative second-stage cost".into()));
    }
    let atk = attacks(inst)?;
    guard::check("structured first stages", guard::pow2(v1.count_ones() as usize).saturating_mul(atk.len() as u128))?;
    let weights: Vec<Vec<i128>> = atk.iter().map(|a| s.second(a)).collect();
    let v1_items: Vec<usize> = bits(v1).collect();
    let mut best = i128::MAX;
    for_each_subset_upto(&v1_items, v1_items.len(), |xs| {
        let rest = all & !mask(xs);
        let worst = weights
            .par_iter()
            .map(|w| sum(w, rest) - mwis(&adj, w, rest).0)
            .max()
            .unwrap_or(0);
        best = best.min(sum(&s.first, mask(xs)) + worst);
        true
    });
    Ok(best)
}

/// Blow-up bookkeeping: W = vertices outside V₁ (re-indexed locally), and
/// for each X gadget the W-neighbourhoods of both sides.
struct Blowup {
    w: Vec<usize>,
    adj: Vec<u128>,
    all: u128,
    /// (left side, right side, W-neighbours of left, W-neighbours of right)
    gadgets: Vec<(Vec<usize>, Vec<usize>, u128, u128)>,
    side: usize,
    k: usize,
}

impl Blowup {
    fn new(inst: &RobustGraphInstance, map: &GadgetMap) -> Result<Self> {
        let v = inst.graph.num_vertices;
        let mut local = vec![usize::MAX; v];
        let v1 = map.items_with(Role::FirstStage);
        let w: Vec<usize> = (0..v).filter(|i| v1.binary_search(i).is_err()).collect();
        if w.len() > 128 {
            return Err(Error::TooLarge { what: "blow-up decider (vertices outside V₁)", needed: w.len() as u128, limit: 128 });
        }
        for (i, &u) in w.iter().enumerate() {
            local[u] = i;
        }
        let mut adj = vec![0u128; w.len()];
        let mut nb = vec![0u128; v];
        for &(a, b) in &inst.graph.edges {
            match (local[a], local[b]) {
                (usize::MAX, usize::MAX) => {}
                (usize::MAX, lb) => nb[a] |= 1 << lb,
                (la, usize::MAX) => nb[b] |= 1 << la,
                (la, lb) => {
                    adj[la] |= 1 << lb;
                    adj[lb] |= 1 << la;
                }
            }
        }
        let mut gadgets = Vec::new();
        let mut sizes = Vec::new();
        for &x in &map.x {
            let l = map.special_for(Role::BlowupLeft, x).unwrap().items.clone();
            let r = map.special_for(Role::BlowupRight, x).unwrap().items.clone();
            let nl = l.iter().fold(0, |m, &u| m | nb[u]);
            let nr = r.iter().fold(0, |m, &u| m | nb[u]);
            sizes.push(l.len());
            sizes.push(r.len());
            gadgets.push((l, r, nl, nr));
        }
        let side = *sizes.iter().min().unwrap_or(&0);
        if sizes.iter().any(|&s| s != side) {
            return Err(Error::InconsistentMap("blow-up sides differ in size".into()));
        }
        Ok(Blowup {
            all: guard::pow2(w.len()).wrapping_sub(1),
            w,
            adj,
            gadgets,
            side,
            k: inst.k_recover.unwrap_or(0) as usize,
        })
    }

    fn local(&self, full: &[i128]) -> Vec<i128> {
        self.w.iter().map(|&u| full[u]).collect()
    }

    fn chosen(&self, sigma: u64, i: usize) -> &[usize] {
        let g = &self.gadgets[i];
        if sigma >> i & 1 == 1 {
            &g.0
        } else {
            &g.1
        }
    }

    /// W-neighbours of the chosen (`true`) or the other (`false`) sides,
    /// skipping gadget `skip`.
    fn touched(&self, sigma: u64, chosen: bool, skip: Option<usize>) -> u128 {
        let mut m = 0;
        for (i, g) in self.gadgets.iter().enumerate() {
            if Some(i) == skip {
                continue;
            }
            let left = sigma >> i & 1 == 1;
            m |= if left == chosen { g.2 } else { g.3 };
        }
        m
    }

    fn side_cost(&self, w: &[i128], sigma: u64, skip: Option<usize>) -> i128 {
        (0..self.gadgets.len())
            .filter(|&i| Some(i) != skip)
            .map(|i| self.chosen(sigma, i).iter().map(|&u| w[u]).sum::<i128>())
            .sum()
    }
}

fn thr(map: &GadgetMap, s: &Scaled) -> Result<i128> {
    (&map.threshold * Q::from_integer(s.scale.clone()))
        .to_integer()
        .to_i128()
        .ok_or_else(|| Error::invalid("threshold too large"))
}

/// Recoverable VC with σ ranging over the side of each X gadget that the
/// first stage covers. Returns (value, threshold reachable only this way).
fn recoverable_vc(inst: &RobustGraphInstance, map: &GadgetMap, s: &Scaled) -> Result<(i128, bool)> {
    let b = Blowup::new(inst, map)?;
    let pre = |m: &str| Err(Error::Precondition(m.to_string()));
    if b.w.len() > b.k {
        return pre("W-parts cannot move freely within the recovery budget");
    }
    if 2 * b.side <= b.k {
        return pre("recovery could switch a whole blow-up side");
    }
    let v1 = map.items_with(Role::FirstStage);
    let min_c_v1 = v1.iter().map(|&v| s.nom[v].min(s.dev[v])).min().unwrap_or(0);
    let max_c_w: i128 = b.w.iter().map(|&u| s.nom[u].max(s.dev[u])).sum();
    if (b.side as i128) * min_c_v1 < max_c_w {
        return pre("adding a blow-up side in recovery could pay off");
    }
    let atk = attacks(inst)?;
    let n = b.gadgets.len();
    guard::check("structured first stages", guard::pow2(n).saturating_mul(atk.len() as u128))?;
    let cw = b.local(&s.first);
    let weights: Vec<(Vec<i128>, Vec<i128>)> = atk
        .iter()
        .map(|a| {
            let full = s.second(a);
            let l = b.local(&full);
            (full, l)
        })
        .collect();
    let mut best = i128::MAX;
    for sigma in 0..1u64 << n {
        // W-vertices next to the uncovered sides must be covered
        let forced = b.touched(sigma, false, None);
        let free = b.all & !forced;
        let first = b.side_cost(&s.first, sigma, None) + sum(&cw, b.all) - mwis(&b.adj, &cw, free).0;
        let worst = weights
            .par_iter()
            .map(|(full, l)| b.side_cost(full, sigma, None) + sum(l, b.all) - mwis(&b.adj, l, free).0)
            .max()
            .unwrap_or(0);
        best = best.min(first + worst);
    }
    // any first stage with an extra V₁ vertex costs at least this much
    let mvc = b.w.len() as i128 - mwis(&b.adj, &vec![1; b.w.len()], b.all).0;
    let min_cw = b.w.iter().map(|&u| s.first[u]).min().unwrap_or(0);
    let min_c_w = b.w.iter().map(|&u| s.nom[u].min(s.dev[u])).min().unwrap_or(0);
    let min_cv1 = v1.iter().map(|&v| s.first[v]).min().unwrap_or(0);
    let sides = (n * b.side) as i128;
    let extra_lb = (sides + 1) * min_cv1 + mvc * min_cw + sides * min_c_v1 + mvc * min_c_w;
    Ok((best, extra_lb > thr(map, s)?))
}

/// Recoverable IS: the first stage takes one full side per X gadget; the
/// recovery keeps every side or drops exactly one.
fn recoverable_is(inst: &RobustGraphInstance, map: &GadgetMap) -> Result<bool> {
    let s = Scaled::new(inst)?;
    let b = Blowup::new(inst, map)?;
    let pre = |m: &str| Err(Error::Precondition(m.to_string()));
    if b.w.len() + b.side > b.k {
        return pre("dropping a side must fit the recovery budget");
    }
    if 2 * b.side <= b.k {
        return pre("recovery could drop or switch two sides");
    }
    let tau = thr(map, &s)?;
    let v1 = map.items_with(Role::FirstStage);
    let n = b.gadgets.len();
    let sides = (n * b.side) as i128;
    let max_cv1 = v1.iter().map(|&v| s.first[v]).max().unwrap_or(0);
    let max_c_v1 = v1.iter().map(|&v| s.nom[v].max(s.dev[v])).max().unwrap_or(0);
    let cw = nonneg(&b.local(&s.first));
    let c_w = nonneg(&b.local(&s.nom));
    // a first stage missing part of a side cannot reach τ
    let ub = (sides - 1) * max_cv1 + mwis(&b.adj, &cw, b.all).0 + sides * max_c_v1 + mwis(&b.adj, &c_w, b.all).0;
    if ub >= tau {
        return pre("first stages without full sides could reach the threshold");
    }
    let atk = attacks(inst)?;
    guard::check("structured first stages", guard::pow2(n).saturating_mul(atk.len() as u128))?;
    let weights: Vec<(Vec<i128>, Vec<i128>)> = atk
        .iter()
        .map(|a| {
            let full = nonneg(&s.second(a));
            let l = b.local(&full);
            (full, l)
        })
        .collect();
    let slack = (b.k - b.side) as i128;
    for sigma in 0..1u64 << n {
        let blocked = b.touched(sigma, true, None);
        let first = b.side_cost(&s.first, sigma, None) + mwis(&b.adj, &cw, b.all & !blocked).0;
        let all_met = weights.par_iter().map(|(full, l)| -> Result<bool> {
            let keep = b.side_cost(full, sigma, None) + mwis(&b.adj, l, b.all & !blocked).0;
            let mut best = keep;
            let mut best_drop = i128::MIN;
            for i in 0..n {
                let bl = b.touched(sigma, true, Some(i));
                let d = b.side_cost(full, sigma, Some(i)) + mwis(&b.adj, l, b.all & !bl).0;
                best_drop = best_drop.max(d);
            }
            best = best.max(best_drop);
            // dropping a side and re-adding copies of the other one
            if first + best < tau && n > 0 && first + best_drop + slack * max_c_v1 >= tau {
                return pre("partial switches could decide this attack");
            }
            Ok(first + best >= tau)
        });
        let ok: Result<Vec<bool>> = all_met.collect();
        if ok?.into_iter().all(|v| v) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// TSP: Rob = 0 iff some X assignment σ fixes the first stage (the X-ladder
/// modes) so that every attack on E₂ still leaves a zero-cost tour.
fn tsp(inst: &RobustGraphInstance, map: &GadgetMap) -> Result<bool> {
    let s = Scaled::new(inst)?;
    let m = inst.graph.edges.len();
    let e1 = map.items_with(Role::FirstStage);
    let recoverable = map.construction == Construction::RecoverableTsp;
    let dc = inst.default_cost.as_ref();
    if map.threshold != Q::from_integer(0.into()) || dc.is_some_and(|d| d.first.is_zero() || d.nominal.is_zero()) {
        return Err(Error::Precondition("threshold must be 0 and off-support edges must cost".into()));
    }
    use num_traits::Zero;
    let free_first: Vec<bool> = (0..m).map(|e| s.first[e] == 0).collect();
    if !recoverable {
        let in_e1 = |e: usize| e1.binary_search(&e).is_ok();
        if (0..m).any(|e| free_first[e] != in_e1(e)) || e1.iter().any(|&e| s.nom[e] == 0 || s.dev[e] == 0) {
            return Err(Error::Precondition("E₁ must be exactly the free first-stage edges".into()));
        }
    } else {
        // flipping an X variable must cost more than k
        for &x in &map.x {
            let moved: usize = map
                .xor_gadgets
                .iter()
                .filter(|g| g.lit.unsigned_abs() == x)
                .map(|g| g.top_only.len() + g.bottom_only.len())
                .sum();
            if moved <= inst.k_recover.unwrap_or(0) as usize {
                return Err(Error::Precondition("X gadgets too thin for the recovery budget".into()));
            }
        }
    }
    let atk = attacks(inst)?;
    let n = map.x.len();
    guard::check("structured first stages", guard::pow2(n).saturating_mul(atk.len() as u128))?;
    let k = inst.k_recover.unwrap_or(0) as usize;
    for sigma in 0..1u64 << n {
        let mut fixed: Vec<Option<bool>> = vec![None; m];
        for g in &map.xor_gadgets {
            let Some(i) = map.x.iter().position(|&x| x == g.lit.unsigned_abs()) else {
                continue;
            };
            let top = (sigma >> i & 1 == 1) == (g.lit > 0);
            let off = if top { &g.bottom_only } else { &g.top_only };
            for &e in &g.items {
                fixed[e] = Some(true);
            }
            for &e in off {
                fixed[e] = Some(false);
            }
        }
        // the recovery baseline: a tour of free first-stage edges
        let base = if recoverable {
            let mut f = fixed.clone();
            for e in 0..m {
                if !free_first[e] {
                    f[e] = Some(false);
                }
            }
            match Hamilton::new(inst.graph.num_vertices, &inst.graph.edges).find(&f)? {
                Some(mut t) => {
                    t.sort_unstable();
                    Some(t)
                }
                None => continue,
            }
        } else {
            None
        };
        let results: Result<Vec<bool>> = atk
            .par_iter()
            .map(|a| -> Result<bool> {
                let w = s.second(a);
                let mut f = fixed.clone();
                for e in 0..m {
                    if w[e] == 0 || (!recoverable && free_first[e]) {
                        continue;
                    }
                    if f[e] == Some(true) {
                        return Ok(false);
                    }
                    f[e] = Some(false);
                }
                let Some(mut tour) = Hamilton::new(inst.graph.num_vertices, &inst.graph.edges).find(&f)? else {
                    return Ok(false);
                };
                tour.sort_unstable();
                if let Some(b) = &base {
                    let d = tour.iter().filter(|e| b.binary_search(e).is_err()).count() * 2;
                    if d > k {
                        return Err(Error::Structure(format!("recovery tour at distance {d} > k = {k}")));
                    }
                }
                Ok(true)
            })
            .collect();
        if results?.into_iter().all(|v| v) {
            return Ok(true);
        }
    }
    Ok(false)
}
