//! Two-stage problems with affine objective uncertainty over the continuous
//! budgeted polytope Z = {ζ ∈ [0,1]^ℓ : Σζ ≤ Γ}, and the comparison between
//! full recourse and a fixed menu of m recourse candidates.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{solve_lp, LpResult, RationalLp, Sense};
use crate::qsolve::game::for_each_combination;
use crate::rational::{self, q, Q};
use crate::{guard, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FirstStage {
    pub x: Vec<i64>,
    /// X(x); nonempty.
    pub second_stage: Vec<Vec<i64>>,
}

/// f(x, y, ζ) = C·x + Σᵢ (c̲ᵢ + (c̄ᵢ − c̲ᵢ) ζᵢ) yᵢ, minimized over x and y.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveUncertaintyProblem {
    pub first_stage: Vec<FirstStage>,
    #[serde(with = "rational::serde_q_vec")]
    pub first_cost: Vec<Q>,
    #[serde(with = "rational::serde_q_vec")]
    pub nominal: Vec<Q>,
    #[serde(with = "rational::serde_q_vec")]
    pub deviated: Vec<Q>,
    #[serde(with = "rational::serde_q")]
    pub gamma: Q,
}

impl ObjectiveUncertaintyProblem {
    /// ℓ, the dimension of y and ζ.
    pub fn dim(&self) -> usize {
        self.nominal.len()
    }

    pub fn validate(&self) -> Result<()> {
        let l = self.dim();
        if self.deviated.len() != l {
            return Err(Error::invalid("nominal/deviated length mismatch"));
        }
        if self.first_stage.is_empty() {
            return Err(Error::invalid("no first-stage solutions"));
        }
        for fs in &self.first_stage {
            if fs.x.len() != self.first_cost.len() {
                return Err(Error::invalid("first-stage vector has wrong length"));
            }
            if fs.second_stage.is_empty() {
                return Err(Error::invalid("X(x) must be nonempty"));
            }
            if fs.second_stage.iter().any(|y| y.len() != l) {
                return Err(Error::invalid("second-stage vector has wrong length"));
            }
        }
        if self.gamma < q(0) {
            return Err(Error::invalid("negative budget"));
        }
        Ok(())
    }

    fn first_value(&self, x: &[i64]) -> Q {
        self.first_cost
            .iter()
            .zip(x)
            .map(|(c, &v)| c * q(v))
            .sum()
    }

    /// f(x, y, ζ) for an explicit scenario.
    pub fn eval(&self, x: &[i64], y: &[i64], zeta: &[Q]) -> Q {
        let mut v = self.first_value(x);
        for i in 0..self.dim() {
            let c = &self.nominal[i] + (&self.deviated[i] - &self.nominal[i]) * &zeta[i];
            v += c * q(y[i]);
        }
        v
    }
}

/// max_{ζ∈Z} min_i f(x, yᵢ, ζ) as the epigraph LP over (ζ, t).
pub fn adversary_value(candidates: &[Vec<i64>], x: &[i64], p: &ObjectiveUncertaintyProblem) -> Result<Q> {
    if candidates.is_empty() {
        return Err(Error::invalid("empty candidate list"));
    }
    let l = p.dim();
    let mut obj = vec![q(0); l + 1];
    obj[l] = q(1);
    let mut lp = RationalLp::new(Sense::Max, obj);
    let base = p.first_value(x);
    for y in candidates {
        // t − Σ dᵢ yᵢ ζᵢ ≤ C·x + c̲·y
        let mut row: Vec<Q> = (0..l)
            .map(|i| -(&p.deviated[i] - &p.nominal[i]) * q(y[i]))
            .collect();
        row.push(q(1));
        let rhs = &base + (0..l).map(|i| &p.nominal[i] * q(y[i])).sum::<Q>();
        lp.leq(row, rhs);
    }
    let mut budget = vec![q(1); l];
    budget.push(q(0));
    lp.leq(budget, p.gamma.clone());
    for i in 0..l {
        lp.bounds(i, Some(q(0)), Some(q(1)));
    }
    match solve_lp(&lp)? {
        LpResult::Optimal { value, .. } => Ok(value),
        other => Err(Error::invalid(format!("adversary LP ended {other:?}"))),
    }
}

/// min_x max_ζ min_{y∈X(x)} f(x, y, ζ).
pub fn rob_direct(p: &ObjectiveUncertaintyProblem) -> Result<Q> {
    p.validate()?;
    let mut best: Option<Q> = None;
    for fs in &p.first_stage {
        let v = adversary_value(&fs.second_stage, &fs.x, p)?;
        if best.as_ref().is_none_or(|b| v < *b) {
            best = Some(v);
        }
    }
    Ok(best.expect("validated nonempty"))
}

/// min_x min_{y⁽¹⁾…y⁽ᵐ⁾ ∈ X(x)} max_ζ min_i f(x, y⁽ⁱ⁾, ζ).
///
/// Tuples may repeat entries, so a tuple is as good as its set of distinct
/// entries; since adding candidates never hurts, it suffices to try the
/// subsets of size exactly min(m, |X(x)|).
pub fn rob_kadapt(p: &ObjectiveUncertaintyProblem, m: usize) -> Result<Q> {
    p.validate()?;
    if m == 0 {
        return Err(Error::invalid("tuple size must be at least 1"));
    }
    let total: u128 = p
        .first_stage
        .iter()
        .map(|fs| guard::subsets_up_to(fs.second_stage.len(), m))
        .sum();
    guard::check("k-adaptability tuples", total)?;
    let mut best: Option<Q> = None;
    for fs in &p.first_stage {
        let size = m.min(fs.second_stage.len());
        let idx: Vec<usize> = (0..fs.second_stage.len()).collect();
        let mut err = None;
        for_each_combination(&idx, size, |s| {
            let cands: Vec<Vec<i64>> = s.iter().map(|&i| fs.second_stage[i].clone()).collect();
            match adversary_value(&cands, &fs.x, p) {
                Ok(v) => {
                    if best.as_ref().is_none_or(|b| v < *b) {
                        best = Some(v);
                    }
                    true
                }
                Err(e) => {
                    err = Some(e);
                    false
                }
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    Ok(best.expect("validated nonempty"))
}

/// Smallest m with rob_kadapt(m) = rob_direct.
pub fn smallest_equalizing_m(p: &ObjectiveUncertaintyProblem) -> Result<usize> {
    let target = rob_direct(p)?;
    let cap = p.first_stage.iter().map(|f| f.second_stage.len()).max().unwrap_or(1);
    for m in 1..=cap {
        if rob_kadapt(p, m)? == target {
            return Ok(m);
        }
    }
    Ok(cap)
}

/// Random instance: ℓ ≤ 3 items, ≤ 2 first-stage choices with ≤ 4 distinct
/// binary recourse vectors each, integer costs, Γ ∈ {0, 1, 2}.
pub fn random_problem<R: Rng>(rng: &mut R) -> ObjectiveUncertaintyProblem {
    let l = rng.gen_range(1..=3usize);
    let nx = rng.gen_range(1..=2usize);
    let bits = |v: u32, len: usize| (0..len).map(|i| (v >> i & 1) as i64).collect::<Vec<_>>();
    let mut first_stage = Vec::new();
    let mut xs: Vec<u32> = (0..1 << l).collect();
    for _ in 0..nx {
        let x = xs.remove(rng.gen_range(0..xs.len()));
        let mut pool: Vec<u32> = (0..1 << l).collect();
        let k = rng.gen_range(1..=4usize.min(pool.len()));
        let mut second = Vec::new();
        for _ in 0..k {
            let y = pool.remove(rng.gen_range(0..pool.len()));
            second.push(bits(y, l));
        }
        first_stage.push(FirstStage {
            x: bits(x, l),
            second_stage: second,
        });
    }
    let nominal: Vec<Q> = (0..l).map(|_| q(rng.gen_range(0..=5))).collect();
    let deviated = nominal.iter().map(|c| c + q(rng.gen_range(0..=5))).collect();
    ObjectiveUncertaintyProblem {
        first_stage,
        first_cost: (0..l).map(|_| q(rng.gen_range(0..=5))).collect(),
        nominal,
        deviated,
        gamma: q(rng.gen_range(0..=2)),
    }
}
