//! CNF model, partitioned quantified instances and their text formats.

mod io;
mod normalize;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use io::{
    parse_kqsat, parse_kradjsat, parse_qsat, parse_radjsat, write_kqsat, write_kradjsat,
    write_qsat, write_radjsat,
};
pub use normalize::{normalize_to_3cnf, Normalized};

/// A literal over a 1-based variable index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub var: u32,
    pub neg: bool,
}

impl Literal {
    pub fn pos(var: u32) -> Self {
        Literal { var, neg: false }
    }

    pub fn neg(var: u32) -> Self {
        Literal { var, neg: true }
    }

    /// DIMACS integer form.
    pub fn from_dimacs(v: i32) -> Self {
        Literal {
            var: v.unsigned_abs(),
            neg: v < 0,
        }
    }

    pub fn to_dimacs(self) -> i32 {
        if self.neg {
            -(self.var as i32)
        } else {
            self.var as i32
        }
    }

    pub fn negated(self) -> Self {
        Literal {
            var: self.var,
            neg: !self.neg,
        }
    }

    pub fn satisfied_by(self, value: bool) -> bool {
        value != self.neg
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// Nonempty disjunction, kept sorted by (variable, positive-first) with
/// duplicates removed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Clause(Vec<Literal>);

impl Clause {
    pub fn new(lits: impl IntoIterator<Item = Literal>) -> Self {
        let mut v: Vec<Literal> = lits.into_iter().collect();
        v.sort();
        v.dedup();
        Clause(v)
    }

    pub fn from_dimacs(lits: &[i32]) -> Self {
        Clause::new(lits.iter().map(|&l| Literal::from_dimacs(l)))
    }

    pub fn literals(&self) -> &[Literal] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_var(&self) -> u32 {
        self.0.iter().map(|l| l.var).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CnfFormula {
    pub num_vars: u32,
    pub clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(num_vars: u32, clauses: Vec<Clause>) -> Result<Self> {
        for c in &clauses {
            if c.is_empty() {
                return Err(Error::invalid("empty clause"));
            }
            if c.max_var() > num_vars || c.literals().iter().any(|l| l.var == 0) {
                return Err(Error::invalid(format!(
                    "clause mentions variable outside 1..={num_vars}"
                )));
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn from_dimacs(num_vars: u32, clauses: &[&[i32]]) -> Result<Self> {
        Self::new(
            num_vars,
            clauses.iter().map(|c| Clause::from_dimacs(c)).collect(),
        )
    }

    /// Evaluate against a dense 1-based table (`values[v-1]`).
    pub fn eval_dense(&self, values: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.literals()
                .iter()
                .any(|l| l.satisfied_by(values[l.var as usize - 1]))
        })
    }

    /// Variables that occur in at least one clause.
    pub fn occurring(&self) -> BTreeSet<u32> {
        self.clauses
            .iter()
            .flat_map(|c| c.literals().iter().map(|l| l.var))
            .collect()
    }
}

/// Total map from a declared variable set to truth values.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Assignment {
    pub values: BTreeMap<u32, bool>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, bool)>) -> Self {
        Assignment {
            values: pairs.into_iter().collect(),
        }
    }

    pub fn set(&mut self, var: u32, value: bool) {
        self.values.insert(var, value);
    }

    pub fn get(&self, var: u32) -> Option<bool> {
        self.values.get(&var).copied()
    }

    pub fn restrict(&self, vars: &[u32]) -> Assignment {
        Assignment::from_pairs(vars.iter().filter_map(|&v| self.get(v).map(|b| (v, b))))
    }
}

pub fn eval_formula(formula: &CnfFormula, assignment: &Assignment) -> Result<bool> {
    let mut dense = Vec::with_capacity(formula.num_vars as usize);
    for v in 1..=formula.num_vars {
        dense.push(
            assignment
                .get(v)
                .ok_or(Error::IncompleteAssignment(v))?,
        );
    }
    Ok(formula.eval_dense(&dense))
}

fn check_partition(num_vars: u32, blocks: &[&[u32]]) -> Result<()> {
    let mut seen = vec![false; num_vars as usize + 1];
    for b in blocks {
        for &v in *b {
            if v == 0 || v > num_vars {
                return Err(Error::invalid(format!("partition mentions unknown variable {v}")));
            }
            if std::mem::replace(&mut seen[v as usize], true) {
                return Err(Error::invalid(format!("variable {v} in two blocks")));
            }
        }
    }
    if let Some(v) = (1..=num_vars).find(|&v| !seen[v as usize]) {
        return Err(Error::invalid(format!("variable {v} in no block")));
    }
    Ok(())
}

fn sorted(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    v
}

fn range(from: u32, len: u32) -> Vec<u32> {
    (from..from + len).collect()
}

/// Permute variables so that the given blocks become contiguous ranges in
/// order; returns the renamed formula and block sizes.
fn canonicalize(formula: &CnfFormula, blocks: &[&[u32]]) -> (CnfFormula, Vec<u32>) {
    let mut map = vec![0u32; formula.num_vars as usize + 1];
    let mut next = 1;
    for b in blocks {
        for &v in *b {
            map[v as usize] = next;
            next += 1;
        }
    }
    let clauses = formula
        .clauses
        .iter()
        .map(|c| {
            Clause::new(c.literals().iter().map(|l| Literal {
                var: map[l.var as usize],
                neg: l.neg,
            }))
        })
        .collect();
    (
        CnfFormula {
            num_vars: formula.num_vars,
            clauses,
        },
        blocks.iter().map(|b| b.len() as u32).collect(),
    )
}

/// ∃X ∀Y′⊆Y, |Y′|≤Γ, Y′:=0 ∃(Y∖Y′)∪Z : φ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RAdjSatInstance {
    pub formula: CnfFormula,
    pub x: Vec<u32>,
    pub y: Vec<u32>,
    pub z: Vec<u32>,
    pub gamma: u32,
}

impl RAdjSatInstance {
    pub fn new(formula: CnfFormula, x: Vec<u32>, y: Vec<u32>, z: Vec<u32>, gamma: u32) -> Result<Self> {
        let (x, y, z) = (sorted(x), sorted(y), sorted(z));
        check_partition(formula.num_vars, &[&x, &y, &z])?;
        Ok(RAdjSatInstance {
            formula,
            x,
            y,
            z,
            gamma,
        })
    }

    /// Contiguous layout: X = 1..=nx, Y next, Z last.
    pub fn contiguous(nx: u32, ny: u32, nz: u32, gamma: u32, clauses: Vec<Clause>) -> Result<Self> {
        let formula = CnfFormula::new(nx + ny + nz, clauses)?;
        Self::new(
            formula,
            range(1, nx),
            range(nx + 1, ny),
            range(nx + ny + 1, nz),
            gamma,
        )
    }

    pub fn is_contiguous(&self) -> bool {
        let n = (self.x.len() + self.y.len()) as u32;
        self.x == range(1, self.x.len() as u32)
            && self.y == range(self.x.len() as u32 + 1, self.y.len() as u32)
            && self.z == range(n + 1, self.z.len() as u32)
    }

    pub fn canonical(&self) -> Self {
        if self.is_contiguous() {
            return self.clone();
        }
        let (formula, s) = canonicalize(&self.formula, &[&self.x, &self.y, &self.z]);
        Self::new(
            formula,
            range(1, s[0]),
            range(s[0] + 1, s[1]),
            range(s[0] + s[1] + 1, s[2]),
            self.gamma,
        )
        .expect("canonical relabelling preserves the partition")
    }

    /// Helpers introduced by 3-CNF normalization join Z.
    pub fn normalize_to_3cnf(&self) -> (Self, Normalized) {
        let norm = normalize_to_3cnf(&self.formula);
        let mut z = self.z.clone();
        z.extend(&norm.helpers);
        let inst = Self::new(norm.formula.clone(), self.x.clone(), self.y.clone(), z, self.gamma)
            .expect("helpers are fresh");
        (inst, norm)
    }

    /// Add clause-free variables until |X| = |Y| = |Z|.
    pub fn pad_partition_equal(&self) -> Self {
        let target = self.x.len().max(self.y.len()).max(self.z.len());
        let mut next = self.formula.num_vars + 1;
        let mut grow = |set: &[u32]| {
            let mut s = set.to_vec();
            while s.len() < target {
                s.push(next);
                next += 1;
            }
            s
        };
        let (x, y, z) = (grow(&self.x), grow(&self.y), grow(&self.z));
        let formula = CnfFormula {
            num_vars: next - 1,
            clauses: self.formula.clauses.clone(),
        };
        Self::new(formula, x, y, z, self.gamma).expect("padding is fresh")
    }

    pub fn is_3cnf(&self) -> bool {
        self.formula.clauses.iter().all(|c| c.len() == 3)
    }

    pub fn as_kstage(&self) -> KStageRAdjSatInstance {
        KStageRAdjSatInstance {
            formula: self.formula.clone(),
            blocks: vec![self.x.clone(), self.y.clone(), self.z.clone()],
            gamma: self.gamma,
            k: 2,
        }
    }
}

/// Alternating game over 2k−1 blocks: odd blocks are assigned by the
/// player, each even block is attacked (≤ Γ of its variables forced to 0)
/// before the player assigns the remainder together with the next odd block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KStageRAdjSatInstance {
    pub formula: CnfFormula,
    pub blocks: Vec<Vec<u32>>,
    pub gamma: u32,
    pub k: u32,
}

impl KStageRAdjSatInstance {
    pub fn new(formula: CnfFormula, blocks: Vec<Vec<u32>>, gamma: u32, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        if blocks.len() != 2 * k as usize - 1 {
            return Err(Error::invalid(format!(
                "k={k} needs {} blocks, got {}",
                2 * k - 1,
                blocks.len()
            )));
        }
        let blocks: Vec<Vec<u32>> = blocks.into_iter().map(sorted).collect();
        let refs: Vec<&[u32]> = blocks.iter().map(|b| b.as_slice()).collect();
        check_partition(formula.num_vars, &refs)?;
        Ok(KStageRAdjSatInstance {
            formula,
            blocks,
            gamma,
            k,
        })
    }

    pub fn contiguous(k: u32, gamma: u32, sizes: &[u32], clauses: Vec<Clause>) -> Result<Self> {
        let total = sizes.iter().sum();
        let formula = CnfFormula::new(total, clauses)?;
        let mut next = 1;
        let blocks = sizes
            .iter()
            .map(|&s| {
                let b = range(next, s);
                next += s;
                b
            })
            .collect();
        Self::new(formula, blocks, gamma, k)
    }

    pub fn canonical(&self) -> Self {
        let refs: Vec<&[u32]> = self.blocks.iter().map(|b| b.as_slice()).collect();
        let (formula, sizes) = canonicalize(&self.formula, &refs);
        let mut next = 1;
        let blocks = sizes
            .iter()
            .map(|&s| {
                let b = range(next, s);
                next += s;
                b
            })
            .collect();
        Self::new(formula, blocks, self.gamma, self.k).expect("relabelling preserves partition")
    }

    /// k = 2 view as a plain R-Adj-SAT instance.
    pub fn as_radjsat(&self) -> Option<RAdjSatInstance> {
        (self.k == 2).then(|| RAdjSatInstance {
            formula: self.formula.clone(),
            x: self.blocks[0].clone(),
            y: self.blocks[1].clone(),
            z: self.blocks[2].clone(),
            gamma: self.gamma,
        })
    }

    pub fn normalize_to_3cnf(&self) -> (Self, Normalized) {
        let norm = normalize_to_3cnf(&self.formula);
        let mut blocks = self.blocks.clone();
        blocks.last_mut().unwrap().extend(&norm.helpers);
        let inst = Self::new(norm.formula.clone(), blocks, self.gamma, self.k)
            .expect("helpers are fresh");
        (inst, norm)
    }
}

/// ∃A ∀B ∃C : ψ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSatInstance {
    pub formula: CnfFormula,
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub c: Vec<u32>,
}

impl QSatInstance {
    pub fn new(formula: CnfFormula, a: Vec<u32>, b: Vec<u32>, c: Vec<u32>) -> Result<Self> {
        let (a, b, c) = (sorted(a), sorted(b), sorted(c));
        check_partition(formula.num_vars, &[&a, &b, &c])?;
        Ok(QSatInstance { formula, a, b, c })
    }

    pub fn contiguous(na: u32, nb: u32, nc: u32, clauses: Vec<Clause>) -> Result<Self> {
        let formula = CnfFormula::new(na + nb + nc, clauses)?;
        Self::new(
            formula,
            range(1, na),
            range(na + 1, nb),
            range(na + nb + 1, nc),
        )
    }

    pub fn canonical(&self) -> Self {
        let (formula, s) = canonicalize(&self.formula, &[&self.a, &self.b, &self.c]);
        Self::new(
            formula,
            range(1, s[0]),
            range(s[0] + 1, s[1]),
            range(s[0] + s[1] + 1, s[2]),
        )
        .expect("relabelling preserves partition")
    }

    /// Add clause-free dummies until |A| = |B| = |C|.
    pub fn pad_equal(&self) -> Self {
        let target = self.a.len().max(self.b.len()).max(self.c.len());
        let mut next = self.formula.num_vars + 1;
        let mut grow = |set: &[u32]| {
            let mut s = set.to_vec();
            while s.len() < target {
                s.push(next);
                next += 1;
            }
            s
        };
        let (a, b, c) = (grow(&self.a), grow(&self.b), grow(&self.c));
        let formula = CnfFormula {
            num_vars: next - 1,
            clauses: self.formula.clauses.clone(),
        };
        Self::new(formula, a, b, c).expect("padding is fresh")
    }

    pub fn as_kqsat(&self) -> KQSatInstance {
        KQSatInstance {
            formula: self.formula.clone(),
            blocks: vec![self.a.clone(), self.b.clone(), self.c.clone()],
            k: 2,
        }
    }
}

/// Prenex ∃X₁ ∀X₂ ∃X₃ … ∃X_{2k−1} : ψ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KQSatInstance {
    pub formula: CnfFormula,
    pub blocks: Vec<Vec<u32>>,
    pub k: u32,
}

impl KQSatInstance {
    pub fn new(formula: CnfFormula, blocks: Vec<Vec<u32>>, k: u32) -> Result<Self> {
        if k == 0 || blocks.len() != 2 * k as usize - 1 {
            return Err(Error::invalid("need k ≥ 1 and 2k−1 blocks"));
        }
        let blocks: Vec<Vec<u32>> = blocks.into_iter().map(sorted).collect();
        let refs: Vec<&[u32]> = blocks.iter().map(|b| b.as_slice()).collect();
        check_partition(formula.num_vars, &refs)?;
        Ok(KQSatInstance { formula, blocks, k })
    }

    pub fn contiguous(k: u32, sizes: &[u32], clauses: Vec<Clause>) -> Result<Self> {
        let formula = CnfFormula::new(sizes.iter().sum(), clauses)?;
        let mut next = 1;
        let blocks = sizes
            .iter()
            .map(|&s| {
                let b = range(next, s);
                next += s;
                b
            })
            .collect();
        Self::new(formula, blocks, k)
    }

    pub fn canonical(&self) -> Self {
        let refs: Vec<&[u32]> = self.blocks.iter().map(|b| b.as_slice()).collect();
        let (formula, sizes) = canonicalize(&self.formula, &refs);
        let mut next = 1;
        let blocks = sizes
            .iter()
            .map(|&s| {
                let b = range(next, s);
                next += s;
                b
            })
            .collect();
        Self::new(formula, blocks, self.k).expect("relabelling preserves partition")
    }

    pub fn as_qsat(&self) -> Option<QSatInstance> {
        (self.k == 2).then(|| QSatInstance {
            formula: self.formula.clone(),
            a: self.blocks[0].clone(),
            b: self.blocks[1].clone(),
            c: self.blocks[2].clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn asg(vals: &[bool]) -> Assignment {
        Assignment::from_pairs(vals.iter().enumerate().map(|(i, &b)| (i as u32 + 1, b)))
    }

    #[test]
    fn eval_basics() {
        let empty = CnfFormula::new(2, vec![]).unwrap();
        assert!(eval_formula(&empty, &asg(&[false, true])).unwrap());
        let unit = CnfFormula::from_dimacs(1, &[&[1]]).unwrap();
        assert!(!eval_formula(&unit, &asg(&[false])).unwrap());
        let f = CnfFormula::from_dimacs(2, &[&[1, -2]]).unwrap();
        assert!(eval_formula(&f, &asg(&[false, false])).unwrap());
    }

    #[test]
    fn partial_assignment_is_rejected() {
        let f = CnfFormula::from_dimacs(2, &[&[1, -2]]).unwrap();
        assert!(matches!(
            eval_formula(&f, &asg(&[true])),
            Err(Error::IncompleteAssignment(2))
        ));
    }

    #[test]
    fn clause_canonical_order() {
        let c = Clause::from_dimacs(&[3, -1, 1, 3]);
        let d: Vec<i32> = c.literals().iter().map(|l| l.to_dimacs()).collect();
        assert_eq!(d, vec![1, -1, 3]);
    }

    #[test]
    fn padding_sizes() {
        let i = RAdjSatInstance::contiguous(1, 2, 3, 1, vec![Clause::from_dimacs(&[1, 2, 4])]).unwrap();
        let p = i.pad_partition_equal();
        assert_eq!((p.x.len(), p.y.len(), p.z.len()), (3, 3, 3));
        assert_eq!(p.formula.clauses, i.formula.clauses);
        let again = p.pad_partition_equal();
        assert_eq!(again, p);
    }

    #[test]
    fn partition_must_cover() {
        let f = CnfFormula::new(3, vec![]).unwrap();
        assert!(RAdjSatInstance::new(f.clone(), vec![1], vec![2], vec![], 0).is_err());
        assert!(RAdjSatInstance::new(f, vec![1], vec![2, 1], vec![3], 0).is_err());
    }

    #[test]
    fn canonical_relabels_blocks() {
        let f = CnfFormula::from_dimacs(3, &[&[3, -1]]).unwrap();
        let i = RAdjSatInstance::new(f, vec![3], vec![1], vec![2], 1).unwrap();
        let c = i.canonical();
        assert!(c.is_contiguous());
        assert_eq!(c.formula.clauses[0], Clause::from_dimacs(&[1, -2]));
    }
}
