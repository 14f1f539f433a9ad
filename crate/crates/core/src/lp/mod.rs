//! Exact rational LP by basis enumeration, and the K-adaptability harness.
//!
//! Every vertex of a pointed polyhedron in ℝʳ is the unique solution of r
//! linearly independent tight rows, so enumerating all r-subsets of rows
//! finds the optimum without pivoting rules or tolerances.

pub mod kadapt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::guard;
use crate::qsolve::game::for_each_combination;
use crate::rational::{self, Q};
use crate::{Error, Result};

pub use kadapt::{
    adversary_value, random_problem, rob_direct, rob_kadapt, smallest_equalizing_m, FirstStage,
    ObjectiveUncertaintyProblem,
};

pub const MAX_VARS: usize = 12;
pub const MAX_ROWS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Max,
    Min,
}

/// `sense objective·x` s.t. `a x ≤ b`, `lower ≤ x ≤ upper`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalLp {
    pub sense: Sense,
    #[serde(with = "rational::serde_q_vec")]
    pub objective: Vec<Q>,
    #[serde(with = "rational::serde_q_mat")]
    pub a: Vec<Vec<Q>>,
    #[serde(with = "rational::serde_q_vec")]
    pub b: Vec<Q>,
    pub lower: Vec<Option<Bound>>,
    pub upper: Vec<Option<Bound>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Bound(#[serde(with = "rational::serde_q")] pub Q);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpResult {
    Optimal { value: Q, point: Vec<Q> },
    Infeasible,
    Unbounded,
}

impl RationalLp {
    pub fn new(sense: Sense, objective: Vec<Q>) -> Self {
        let n = objective.len();
        RationalLp {
            sense,
            objective,
            a: Vec::new(),
            b: Vec::new(),
            lower: vec![None; n],
            upper: vec![None; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn leq(&mut self, row: Vec<Q>, rhs: Q) -> &mut Self {
        self.a.push(row);
        self.b.push(rhs);
        self
    }

    pub fn geq(&mut self, row: Vec<Q>, rhs: Q) -> &mut Self {
        self.leq(row.into_iter().map(|v| -v).collect(), -rhs)
    }

    pub fn bounds(&mut self, j: usize, lo: Option<Q>, hi: Option<Q>) -> &mut Self {
        self.lower[j] = lo.map(Bound);
        self.upper[j] = hi.map(Bound);
        self
    }

    /// All constraints, bounds included, as `row · x ≤ rhs`.
    fn rows(&self) -> Vec<(Vec<Q>, Q)> {
        let n = self.num_vars();
        let mut rows: Vec<(Vec<Q>, Q)> = self.a.iter().cloned().zip(self.b.iter().cloned()).collect();
        for j in 0..n {
            let unit = |s: i64| {
                let mut r = vec![Q::zero(); n];
                r[j] = rational::q(s);
                r
            };
            if let Some(Bound(u)) = &self.upper[j] {
                rows.push((unit(1), u.clone()));
            }
            if let Some(Bound(l)) = &self.lower[j] {
                rows.push((unit(-1), -l.clone()));
            }
        }
        rows
    }

    pub fn is_feasible_point(&self, x: &[Q]) -> bool {
        x.len() == self.num_vars() && self.rows().iter().all(|(r, b)| dot(r, x) <= *b)
    }
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// Row echelon form; returns pivot columns.
fn pivots(rows: &[Vec<Q>], n: usize) -> Vec<usize> {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for k in c..n {
                    let t = &f * &m[r][k];
                    m[i][k] -= t;
                }
            }
        }
        piv.push(c);
        r += 1;
    }
    piv
}

/// Unique solution of the square system, if nonsingular.
fn solve_square(mut m: Vec<Vec<Q>>, mut rhs: Vec<Q>) -> Option<Vec<Q>> {
    let n = rhs.len();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        rhs.swap(c, p);
        let inv = Q::one() / &m[c][c];
        for k in c..n {
            m[c][k] = &m[c][k] * &inv;
        }
        rhs[c] = &rhs[c] * &inv;
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in c..n {
                    let t = &f * &m[c][k];
                    m[i][k] -= t;
                }
                let t = &f * &rhs[c];
                rhs[i] -= t;
            }
        }
    }
    Some(rhs)
}

fn binomial(n: usize, k: usize) -> u128 {
    let mut r: u128 = 1;
    for i in 0..k.min(n) {
        r = r.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    r
}

/// Best vertex of {x : rows} in `cols`-space (full column rank assumed).
fn best_vertex(rows: &[(Vec<Q>, Q)], obj: &[Q], maximize: bool) -> Option<(Q, Vec<Q>)> {
    let r = obj.len();
    if r == 0 {
        return rows
            .iter()
            .all(|(_, b)| !b.is_negative())
            .then(|| (Q::zero(), vec![]));
    }
    let idx: Vec<usize> = (0..rows.len()).collect();
    let mut best: Option<(Q, Vec<Q>)> = None;
    for_each_combination(&idx, r, |sub| {
        let m = sub.iter().map(|&i| rows[i].0.clone()).collect();
        let rhs = sub.iter().map(|&i| rows[i].1.clone()).collect();
        if let Some(x) = solve_square(m, rhs) {
            if rows.iter().all(|(row, b)| dot(row, &x) <= *b) {
                let v = dot(obj, &x);
                let better = match &best {
                    None => true,
                    Some((bv, _)) => (maximize && v > *bv) || (!maximize && v < *bv),
                };
                if better {
                    best = Some((v, x));
                }
            }
        }
        true
    });
    best
}

pub fn solve_lp(lp: &RationalLp) -> Result<LpResult> {
    let n = lp.num_vars();
    if lp.a.len() != lp.b.len() || lp.a.iter().any(|r| r.len() != n) || lp.lower.len() != n || lp.upper.len() != n {
        return Err(Error::invalid("LP dimensions are inconsistent"));
    }
    let rows = lp.rows();
    if n > MAX_VARS || rows.len() > MAX_ROWS {
        return Err(Error::TooLarge {
            what: "lp",
            needed: (n.max(rows.len())) as u128,
            limit: if n > MAX_VARS { MAX_VARS } else { MAX_ROWS } as u128,
        });
    }
    let maximize = lp.sense == Sense::Max;
    let mats: Vec<Vec<Q>> = rows.iter().map(|(r, _)| r.clone()).collect();
    let piv = pivots(&mats, n);
    guard::check("lp bases", binomial(rows.len(), piv.len()))?;

    // Coordinates outside the pivot set can be moved to 0 along the lineality
    // space; the objective must be constant there or the LP is unbounded.
    let reduce = |v: &[Q]| piv.iter().map(|&j| v[j].clone()).collect::<Vec<Q>>();
    let red_rows: Vec<(Vec<Q>, Q)> = rows.iter().map(|(r, b)| (reduce(r), b.clone())).collect();
    let red_obj = reduce(&lp.objective);
    let Some((value, red_x)) = best_vertex(&red_rows, &red_obj, maximize) else {
        return Ok(LpResult::Infeasible);
    };

    let lineality_moves_objective = if piv.len() < n {
        // objective must lie in the row space
        let mut with_obj = mats.clone();
        with_obj.push(lp.objective.clone());
        pivots(&with_obj, n).len() > piv.len()
    } else {
        false
    };
    if lineality_moves_objective || !certified_optimal(&red_rows, &red_obj, &red_x, maximize) {
        return Ok(LpResult::Unbounded);
    }
    let mut point = vec![Q::zero(); n];
    for (k, &j) in piv.iter().enumerate() {
        point[j] = red_x[k].clone();
    }
    debug_assert!(lp.is_feasible_point(&point));
    Ok(LpResult::Optimal { value, point })
}

/// KKT at a vertex: the (sense-adjusted) objective is a nonnegative
/// combination of some basis of tight rows. Any cone combination can be taken
/// over linearly independent rows, which extend to a basis of tight rows.
fn certified_optimal(rows: &[(Vec<Q>, Q)], obj: &[Q], x: &[Q], maximize: bool) -> bool {
    let r = obj.len();
    let c: Vec<Q> = if maximize {
        obj.to_vec()
    } else {
        obj.iter().map(|v| -v).collect()
    };
    let tight: Vec<&Vec<Q>> = rows
        .iter()
        .filter(|(row, b)| dot(row, x) == *b)
        .map(|(row, _)| row)
        .collect();
    let idx: Vec<usize> = (0..tight.len()).collect();
    !for_each_combination(&idx, r, |sub| {
        // solve Σ λ_k row_k = c, i.e. Bᵀ λ = c
        let m = (0..r)
            .map(|j| sub.iter().map(|&k| tight[k][j].clone()).collect())
            .collect();
        match solve_square(m, c.clone()) {
            Some(lambda) => lambda.iter().any(|l| l.is_negative()),
            None => true,
        }
    })
}
