//! Adjustable robust MIPs `A x + B y ≤ d₀ + D ζ` with ζ in the continuous
//! budgeted set {ζ ∈ [0,1]^ℓ : ‖ζ‖₁ ≤ Γ′}, the reduction from R-Adj-SAT, and
//! two feasibility checkers: an exact one for threshold-structured models and
//! a sampling falsifier for everything else.
//!
//! A row is *threshold-structured* when its ζ part is a single `−ζᵢ`, its
//! coefficients are integral, every variable is binary and `d₀ = m − ε` with
//! `0 < ε < 1`. The integral left-hand side then sees only `m − 1` or, once
//! `ζᵢ > 1 − ε`, `m − 2`; inner feasibility depends on ζ only through the
//! signature `{i : ζᵢ > 1 − ε}`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::formula::RAdjSatInstance;
use crate::lp::{solve_lp, LpResult, RationalLp, Sense};
use crate::qsolve::game::for_each_subset_upto;
use crate::rational::{self, frac, q, Q};
use crate::{guard, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Continuous,
    Binary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineRhsMip {
    #[serde(rename = "A", with = "rational::serde_q_mat")]
    pub a: Vec<Vec<Q>>,
    #[serde(rename = "B", with = "rational::serde_q_mat")]
    pub b: Vec<Vec<Q>>,
    #[serde(with = "rational::serde_q_vec")]
    pub d0: Vec<Q>,
    #[serde(rename = "D", with = "rational::serde_q_mat")]
    pub d: Vec<Vec<Q>>,
    pub x_domain: Vec<Domain>,
    pub y_domain: Vec<Domain>,
    #[serde(with = "rational::serde_q")]
    pub gamma: Q,
    pub dim_zeta: usize,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "rational::serde_q_opt")]
    pub epsilon: Option<Q>,
}

impl AffineRhsMip {
    pub fn rows(&self) -> usize {
        self.d0.len()
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.rows();
        let (nx, ny, l) = (self.x_domain.len(), self.y_domain.len(), self.dim_zeta);
        if self.a.len() != m || self.b.len() != m || self.d.len() != m {
            return Err(Error::invalid("A, B, D and d0 must have one row per constraint"));
        }
        for r in 0..m {
            if self.a[r].len() != nx || self.b[r].len() != ny || self.d[r].len() != l {
                return Err(Error::invalid(format!("row {r} has inconsistent width")));
            }
        }
        if self.gamma.is_negative() {
            return Err(Error::invalid("budget must be nonnegative"));
        }
        if let Some(e) = &self.epsilon {
            if !e.is_positive() || *e >= q(1) {
                return Err(Error::invalid("epsilon must lie in (0, 1)"));
            }
        }
        Ok(())
    }

    /// Whether ζ lies in the budgeted set.
    pub fn admits(&self, zeta: &[Q]) -> bool {
        zeta.len() == self.dim_zeta
            && zeta.iter().all(|z| !z.is_negative() && *z <= q(1))
            && zeta.iter().fold(Q::zero(), |s, z| s + z) <= self.gamma
    }
}

/// Which second-stage block the ζ-rows attack.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttackTarget {
    /// `z′ᵢ ≤ 2 − ε − ζᵢ`, as in the hardness proof.
    #[default]
    Z,
    /// The same rows on `y′ᵢ`, the block R-Adj-SAT's adversary controls.
    Y,
}

#[derive(Debug, Clone, Default)]
pub struct MipOptions {
    pub target: AttackTarget,
    /// Overrides ε = 1/(nΓ); still checked against the budget.
    pub epsilon: Option<Q>,
}

/// Where each source variable and clause ended up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MipProvenance {
    pub target: AttackTarget,
    /// Source variable → column of the x block.
    pub x_columns: BTreeMap<u32, usize>,
    /// Source variable (Y, then Z) → column of the y block.
    pub y_columns: BTreeMap<u32, usize>,
    pub clause_rows: Vec<usize>,
    pub attack_rows: Vec<usize>,
    /// ζ coordinate i attacks `attacked[i]`.
    pub attacked: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "rational::serde_q_opt")]
    pub epsilon: Option<Q>,
}

pub fn build_mip_from_radjsat(inst: &RAdjSatInstance) -> Result<(AffineRhsMip, MipProvenance)> {
    build_mip_with(inst, &MipOptions::default())
}

pub fn build_mip_with(inst: &RAdjSatInstance, opts: &MipOptions) -> Result<(AffineRhsMip, MipProvenance)> {
    let n = inst.x.len();
    if n == 0 || inst.y.len() != n || inst.z.len() != n {
        return Err(Error::Precondition("X, Y and Z must have the same positive size".into()));
    }
    let gamma = inst.gamma as usize;
    if gamma >= n && gamma > 0 {
        return Err(Error::Precondition(format!("needs Γ < n, got Γ = {gamma}, n = {n}")));
    }
    let epsilon = if gamma == 0 {
        None
    } else {
        let e = opts.epsilon.clone().unwrap_or_else(|| frac(1, (n * gamma) as i64));
        if !e.is_positive() || e >= q(1) {
            return Err(Error::Precondition("ε must lie in (0, 1)".into()));
        }
        // a signature of size Γ+1 needs (Γ+1)(1−ε) < Γ′ = Γ
        if q(gamma as i64 + 1) * (q(1) - &e) < q(gamma as i64) {
            return Err(Error::Precondition(format!(
                "ε = {} lets the adversary cross Γ + 1 thresholds",
                rational::to_text(&e)
            )));
        }
        Some(e)
    };

    let x_columns: BTreeMap<u32, usize> = inst.x.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let y_columns: BTreeMap<u32, usize> = inst.y.iter().chain(&inst.z).enumerate().map(|(i, &v)| (v, i)).collect();
    let (nx, ny) = (n, 2 * n);
    let mut mip = AffineRhsMip {
        a: vec![],
        b: vec![],
        d0: vec![],
        d: vec![],
        x_domain: vec![Domain::Binary; nx],
        y_domain: vec![Domain::Binary; ny],
        gamma: q(gamma as i64),
        dim_zeta: n,
        epsilon: epsilon.clone(),
    };

    // Σ r(l) ≥ 1 with r(v) = v′, r(¬v) = 1 − v′, negated into ≤ form
    let mut clause_rows = Vec::new();
    for clause in &inst.formula.clauses {
        let (mut ax, mut by) = (vec![Q::zero(); nx], vec![Q::zero(); ny]);
        let mut negs = 0i64;
        for lit in clause.literals() {
            let c = if lit.neg {
                negs += 1;
                q(1)
            } else {
                q(-1)
            };
            match x_columns.get(&lit.var) {
                Some(&j) => ax[j] += c,
                None => by[y_columns[&lit.var]] += c,
            }
        }
        clause_rows.push(mip.rows());
        mip.a.push(ax);
        mip.b.push(by);
        mip.d0.push(q(negs - 1));
        mip.d.push(vec![Q::zero(); n]);
    }

    let attacked: Vec<u32> = match opts.target {
        AttackTarget::Z => inst.z.clone(),
        AttackTarget::Y => inst.y.clone(),
    };
    let mut attack_rows = Vec::new();
    if let Some(e) = &epsilon {
        for (i, v) in attacked.iter().enumerate() {
            let mut by = vec![Q::zero(); ny];
            by[y_columns[v]] = q(1);
            let mut dz = vec![Q::zero(); n];
            dz[i] = q(-1);
            attack_rows.push(mip.rows());
            mip.a.push(vec![Q::zero(); nx]);
            mip.b.push(by);
            mip.d0.push(q(2) - e);
            mip.d.push(dz);
        }
    }
    mip.validate()?;
    let prov = MipProvenance {
        target: opts.target,
        x_columns,
        y_columns,
        clause_rows,
        attack_rows,
        attacked,
        epsilon,
    };
    Ok((mip, prov))
}

fn is_integral_row(r: &[Q]) -> bool {
    r.iter().all(|v| v.is_integer())
}

/// The common ε of the ζ-rows, or `None` when no row depends on ζ.
pub fn threshold_epsilon(mip: &AffineRhsMip) -> Result<Option<Q>> {
    mip.validate()?;
    if mip.x_domain.iter().chain(&mip.y_domain).any(|&d| d != Domain::Binary) {
        return Err(Error::Structure("continuous variables".into()));
    }
    let mut eps: Option<Q> = None;
    for r in 0..mip.rows() {
        if !is_integral_row(&mip.a[r]) || !is_integral_row(&mip.b[r]) {
            return Err(Error::Structure(format!("row {r} has fractional coefficients")));
        }
        let nz: Vec<&Q> = mip.d[r].iter().filter(|v| !v.is_zero()).collect();
        match nz.as_slice() {
            [] => {}
            [c] if **c == q(-1) => {
                let e = mip.d0[r].ceil() - &mip.d0[r];
                if e.is_zero() {
                    return Err(Error::Structure(format!("row {r} has an integral right-hand side")));
                }
                if eps.as_ref().is_some_and(|x| *x != e) {
                    return Err(Error::Structure("ζ-rows disagree on ε".into()));
                }
                eps = Some(e);
            }
            _ => return Err(Error::Structure(format!("row {r} is not of the form … ≤ d₀ − ζᵢ"))),
        }
    }
    if let (Some(e), Some(stored)) = (&eps, &mip.epsilon) {
        if e != stored {
            return Err(Error::Structure("stored ε differs from the rows".into()));
        }
    }
    Ok(eps)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub set: Vec<usize>,
    #[serde(with = "rational::serde_q_vec")]
    pub witness: Vec<Q>,
}

/// Every achievable signature, by size then lexicographically. S ≠ ∅ is
/// achievable iff |S|·(1 − ε) < Γ′; the witness puts min(1, Γ′/|S|) on S.
pub fn signature_sets(mip: &AffineRhsMip) -> Result<Vec<Signature>> {
    let eps = threshold_epsilon(mip)?;
    let l = mip.dim_zeta;
    let max = match &eps {
        None => 0,
        Some(e) => (0..=l).take_while(|&s| s == 0 || q(s as i64) * (q(1) - e) < mip.gamma).last().unwrap_or(0),
    };
    guard::check("signatures", guard::subsets_up_to(l, max))?;
    let coords: Vec<usize> = (0..l).collect();
    let mut out = Vec::new();
    for_each_subset_upto(&coords, max, |s| {
        let mut w = vec![Q::zero(); l];
        if !s.is_empty() {
            let v = (&mip.gamma / q(s.len() as i64)).min(q(1));
            for &i in s {
                w[i] = v.clone();
            }
        }
        out.push(Signature { set: s.to_vec(), witness: w });
        true
    });
    Ok(out)
}

/// Right-hand sides with B scaled to integers, for fast ∃y over binaries.
struct Prepared {
    scale: Vec<BigInt>,
    /// binary y columns and their scaled integral coefficients
    bin: Vec<usize>,
    b_int: Vec<Vec<i128>>,
    cont: Vec<usize>,
}

fn prepare(mip: &AffineRhsMip) -> Result<Prepared> {
    let bin: Vec<usize> = (0..mip.y_domain.len()).filter(|&j| mip.y_domain[j] == Domain::Binary).collect();
    let cont: Vec<usize> = (0..mip.y_domain.len()).filter(|&j| mip.y_domain[j] == Domain::Continuous).collect();
    let mut scale = Vec::new();
    let mut b_int = Vec::new();
    for row in &mip.b {
        let s = bin.iter().fold(BigInt::one(), |l, &j| l.lcm(row[j].denom()));
        let ints = bin
            .iter()
            .map(|&j| (&row[j] * Q::from_integer(s.clone())).to_integer().to_i128().ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        scale.push(s);
        b_int.push(ints);
    }
    Ok(Prepared { scale, bin, b_int, cont })
}

fn rhs(mip: &AffineRhsMip, x: &[Q], zeta: &[Q]) -> Vec<Q> {
    (0..mip.rows())
        .map(|r| {
            let mut v = mip.d0[r].clone();
            for (c, z) in mip.d[r].iter().zip(zeta) {
                if !c.is_zero() {
                    v += c * z;
                }
            }
            for (c, xv) in mip.a[r].iter().zip(x) {
                if !c.is_zero() {
                    v -= c * xv;
                }
            }
            v
        })
        .collect()
}

fn floors(p: &Prepared, rhs: &[Q]) -> Result<Vec<i128>> {
    rhs.iter()
        .zip(&p.scale)
        .map(|(v, s)| (v * Q::from_integer(s.clone())).floor().to_integer().to_i128().ok_or(Error::Overflow))
        .collect()
}

fn bits_to_q(bits: u64, len: usize) -> Vec<Q> {
    (0..len).map(|j| q((bits >> j & 1) as i64)).collect()
}

/// ∃y with `B y ≤ rhs`: binary columns enumerated, continuous ones by LP.
fn exists_y(mip: &AffineRhsMip, p: &Prepared, rhs: &[Q]) -> Result<Option<Vec<Q>>> {
    let nb = p.bin.len();
    guard::check("recourse assignments", guard::pow2(nb))?;
    if p.cont.is_empty() {
        let fl = floors(p, rhs)?;
        for bits in 0..1u64 << nb {
            let ok = (0..fl.len()).all(|r| {
                let lhs: i128 = (0..nb).filter(|&j| bits >> j & 1 == 1).map(|j| p.b_int[r][j]).sum();
                lhs <= fl[r]
            });
            if ok {
                let mut y = vec![Q::zero(); mip.y_domain.len()];
                for (j, v) in bits_to_q(bits, nb).into_iter().enumerate() {
                    y[p.bin[j]] = v;
                }
                return Ok(Some(y));
            }
        }
        return Ok(None);
    }
    for bits in 0..1u64 << nb {
        let yb = bits_to_q(bits, nb);
        let mut lp = RationalLp::new(Sense::Max, vec![Q::zero(); p.cont.len()]);
        for r in 0..mip.rows() {
            let fixed = p.bin.iter().zip(&yb).fold(Q::zero(), |s, (&j, v)| s + &mip.b[r][j] * v);
            lp.leq(p.cont.iter().map(|&j| mip.b[r][j].clone()).collect(), &rhs[r] - fixed);
        }
        if let LpResult::Optimal { point, .. } = solve_lp(&lp)? {
            let mut y = vec![Q::zero(); mip.y_domain.len()];
            for (j, v) in yb.into_iter().enumerate() {
                y[p.bin[j]] = v;
            }
            for (j, v) in point.into_iter().enumerate() {
                y[p.cont[j]] = v;
            }
            return Ok(Some(y));
        }
    }
    Ok(None)
}

/// A feasible recourse for first stage `x` under scenario ζ, if any.
pub fn inner_feasible(mip: &AffineRhsMip, x: &[Q], zeta: &[Q]) -> Result<Option<Vec<Q>>> {
    mip.validate()?;
    if x.len() != mip.x_domain.len() || zeta.len() != mip.dim_zeta {
        return Err(Error::invalid("x or ζ has the wrong length"));
    }
    exists_y(mip, &prepare(mip)?, &rhs(mip, x, zeta))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MipVerdict {
    pub feasible: bool,
    /// A robust first stage when feasible.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_q_vec")]
    pub x: Option<Vec<Q>>,
    pub signatures: usize,
}

mod opt_q_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct W(#[serde(with = "rational::serde_q_vec")] Vec<Q>);

    pub fn serialize<S: Serializer>(v: &Option<Vec<Q>>, s: S) -> std::result::Result<S::Ok, S::Error> {
        v.as_ref().map(|x| W(x.clone())).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<Q>>, D::Error> {
        Ok(Option::<W>::deserialize(d)?.map(|w| w.0))
    }
}

/// ∃x ∀ζ ∃y, exact for threshold-structured models: ∀ζ ranges over one
/// witness per achievable signature, which is sound because raising ζ only
/// tightens rows and the rows see ζ only through the signature.
pub fn check_adjustable_feasibility(mip: &AffineRhsMip) -> Result<MipVerdict> {
    let sigs = signature_sets(mip)?;
    let nx = mip.x_domain.len();
    guard::check(
        "adjustable feasibility",
        guard::pow2(nx)
            .saturating_mul(sigs.len() as u128)
            .saturating_mul(guard::pow2(mip.y_domain.len())),
    )?;
    let p = prepare(mip)?;
    let found = (0..1u64 << nx)
        .into_par_iter()
        .map(|bits| -> Result<Option<Vec<Q>>> {
            let x = bits_to_q(bits, nx);
            for s in &sigs {
                if exists_y(mip, &p, &rhs(mip, &x, &s.witness))?.is_none() {
                    return Ok(None);
                }
            }
            Ok(Some(x))
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    let x = found.transpose()?.flatten();
    Ok(MipVerdict {
        feasible: x.is_some(),
        x,
        signatures: sigs.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sampled {
    /// `x` survived every sampled ζ.
    NoCounterexample { x: Vec<Q>, samples: usize },
    /// Every first stage fails on some sampled ζ; one refutation per x.
    Counterexample { refutations: Vec<(Vec<Q>, Vec<Q>)> },
}

impl Sampled {
    pub fn found(&self) -> bool {
        matches!(self, Sampled::Counterexample { .. })
    }
}

/// Points of the budgeted set: the origin, vertex-like points (⌊Γ′⌋ ones
/// plus the fractional remainder) and random interior points with
/// denominator 64, rescaled onto the budget when they overshoot.
pub fn sample_scenarios(mip: &AffineRhsMip, count: usize, seed: u64) -> Vec<Vec<Q>> {
    let l = mip.dim_zeta;
    let mut rng = crate::corpus::rng(seed);
    let mut out = vec![vec![Q::zero(); l]];
    let whole = mip.gamma.floor().to_integer().to_usize().unwrap_or(usize::MAX).min(l);
    let rest = &mip.gamma - mip.gamma.floor();
    while out.len() < count.max(1) {
        let mut z = vec![Q::zero(); l];
        if l > 0 && out.len() % 2 == 1 {
            let mut idx: Vec<usize> = (0..l).collect();
            for i in 0..l {
                idx.swap(i, rng.gen_range(i..l));
            }
            for &i in &idx[..whole] {
                z[i] = q(1);
            }
            if whole < l && !rest.is_zero() {
                z[idx[whole]] = rest.clone();
            }
        } else {
            for v in z.iter_mut() {
                *v = frac(rng.gen_range(0..=64), 64);
            }
            let sum = z.iter().fold(Q::zero(), |s, v| s + v);
            if sum > mip.gamma {
                let f = &mip.gamma / sum;
                for v in z.iter_mut() {
                    *v *= &f;
                }
            }
        }
        out.push(z);
    }
    out
}

/// Falsifier for arbitrary models with binary first stage: looks for an x
/// that survives `count` sampled scenarios. A counterexample is a proof of
/// infeasibility; its absence proves nothing.
pub fn check_feasibility_sampled(mip: &AffineRhsMip, count: usize, seed: u64) -> Result<Sampled> {
    mip.validate()?;
    if mip.x_domain.iter().any(|&d| d != Domain::Binary) {
        return Err(Error::Precondition("sampling enumerates a binary first stage".into()));
    }
    let nx = mip.x_domain.len();
    guard::check("first-stage assignments", guard::pow2(nx))?;
    let p = prepare(mip)?;
    let samples = sample_scenarios(mip, count, seed);
    let mut refutations = Vec::new();
    for bits in 0..1u64 << nx {
        let x = bits_to_q(bits, nx);
        // pure-binary recourse only sees the floored right-hand side
        let mut seen: HashMap<Vec<i128>, bool> = HashMap::new();
        let mut failed = None;
        for z in &samples {
            let r = rhs(mip, &x, z);
            let ok = if p.cont.is_empty() {
                let key = floors(&p, &r)?;
                match seen.get(&key) {
                    Some(&ok) => ok,
                    None => {
                        let ok = exists_y(mip, &p, &r)?.is_some();
                        seen.insert(key, ok);
                        ok
                    }
                }
            } else {
                exists_y(mip, &p, &r)?.is_some()
            };
            if !ok {
                failed = Some(z.clone());
                break;
            }
        }
        match failed {
            None => return Ok(Sampled::NoCounterexample { x, samples: samples.len() }),
            Some(z) => refutations.push((x, z)),
        }
    }
    Ok(Sampled::Counterexample { refutations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Clause;

    fn one_row(b: i64, d0: Q, d: i64, gamma: Q, domain: Domain) -> AffineRhsMip {
        AffineRhsMip {
            a: vec![vec![]],
            b: vec![vec![q(b)]],
            d0: vec![d0],
            d: vec![vec![q(d)]],
            x_domain: vec![],
            y_domain: vec![domain],
            gamma,
            dim_zeta: 1,
            epsilon: None,
        }
    }

    #[test]
    fn clause_row_encodes_replacement() {
        // (x₁ ∨ ¬y₁ ∨ z₁): x′ + (1 − y′) + z′ ≥ 1  ⇔  −x′ + y′ − z′ ≤ 0
        let inst = RAdjSatInstance::contiguous(2, 2, 2, 1, vec![Clause::from_dimacs(&[1, -3, 5])]).unwrap();
        let (mip, prov) = build_mip_from_radjsat(&inst).unwrap();
        let r = prov.clause_rows[0];
        assert_eq!(mip.a[r], vec![q(-1), q(0)]);
        assert_eq!(mip.b[r], vec![q(1), q(0), q(-1), q(0)]);
        assert_eq!(mip.d0[r], q(0));
        assert_eq!(mip.epsilon, Some(frac(1, 2)));
        assert_eq!(mip.d0[prov.attack_rows[0]], frac(3, 2));
    }

    #[test]
    fn signatures_are_strict() {
        let mut m = one_row(1, frac(3, 2), -1, q(1), Domain::Binary);
        m.dim_zeta = 2;
        m.d[0].push(q(0));
        m.a[0].clear();
        m.b.push(vec![q(1)]);
        m.a.push(vec![]);
        m.d0.push(frac(3, 2));
        m.d.push(vec![q(0), q(-1)]);
        let sets: Vec<Vec<usize>> = signature_sets(&m).unwrap().into_iter().map(|s| s.set).collect();
        // 2·(1 − 1/2) = 1 is not < 1: both coordinates cannot pass 1/2 at once
        assert_eq!(sets, vec![vec![], vec![0], vec![1]]);
    }

    #[test]
    fn continuous_recourse_by_lp() {
        // y ≤ 1 − ζ, y ≥ 1
        let mut m = one_row(1, q(1), -1, q(1), Domain::Continuous);
        m.b.push(vec![q(-1)]);
        m.a.push(vec![]);
        m.d0.push(q(-1));
        m.d.push(vec![q(0)]);
        assert!(inner_feasible(&m, &[], &[q(0)]).unwrap().is_some());
        assert!(inner_feasible(&m, &[], &[frac(1, 64)]).unwrap().is_none());
        assert!(check_adjustable_feasibility(&m).is_err());
    }
}
