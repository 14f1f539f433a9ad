//! ∃∀∃-SAT → R-Adj-SAT and its blockwise k-stage generalization.
//!
//! Each universal variable bᵢ becomes a pair yᵗᵢ, yᶠᵢ of attackable
//! variables; an honest attack zeroes exactly one of each pair and so
//! encodes an assignment of B. Cheating attacks are neutralized by the
//! selector s, which satisfies every replaced clause but can only be set if
//! some pair was left completely untouched.

use serde::{Deserialize, Serialize};

use crate::formula::{
    Clause, CnfFormula, KQSatInstance, KStageRAdjSatInstance, Literal, QSatInstance, RAdjSatInstance,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// r(C) ∨ s (one selector per universal block in the k-stage form).
    Replaced,
    /// s̄ᵢ ∨ yᵗᵢ and s̄ᵢ ∨ yᶠᵢ.
    Pair,
    /// s̄ ∨ s₁ ∨ … ∨ sₙ.
    Selector,
    /// Produced by 3-CNF normalization of an earlier clause.
    Normalization,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseTag {
    pub family: Family,
    /// Source clause index for `Replaced`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source_clause: Option<usize>,
    /// Universal block (1-based) for `Pair` / `Selector`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage: Option<u32>,
    /// Pre-normalization output clause for `Normalization`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalized_from: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarImage {
    pub source: u32,
    /// 0-based source block; odd blocks are universal.
    pub block: u32,
    /// One image for existential variables, `[yᵗ, yᶠ]` for universal ones.
    pub images: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub clauses: Vec<ClauseTag>,
    pub variables: Vec<VarImage>,
    /// Per universal block: (sᵢ…, s).
    pub selectors: Vec<(Vec<u32>, u32)>,
    /// Clause-free dummies added to equalize source blocks.
    pub source_padding: Vec<u32>,
}

impl Provenance {
    /// Follows a 3-CNF normalization of the output formula.
    pub fn after_normalization(&self, origin: &[usize], before: &CnfFormula, after: &CnfFormula) -> Provenance {
        let clauses = origin
            .iter()
            .enumerate()
            .map(|(i, &o)| {
                if before.clauses[o] == after.clauses[i] {
                    self.clauses[o].clone()
                } else {
                    ClauseTag {
                        family: Family::Normalization,
                        source_clause: self.clauses[o].source_clause,
                        stage: self.clauses[o].stage,
                        normalized_from: Some(o),
                    }
                }
            })
            .collect();
        Provenance {
            clauses,
            ..self.clone()
        }
    }
}

/// Variable layout of the reduced instance with block size n and k stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub n: u32,
    pub k: u32,
}

impl Layout {
    /// First variable of output block `b` (0-based).
    fn block_start(&self, b: u32) -> u32 {
        // X₁: n; even blocks: 2n; odd blocks after the first: 2n + 1.
        let mut start = 1;
        for i in 0..b {
            start += match i {
                0 => self.n,
                i if i % 2 == 1 => 2 * self.n,
                _ => 2 * self.n + 1,
            };
        }
        start
    }

    /// Image of the i-th (0-based) variable of existential source block `b`.
    pub fn existential(&self, b: u32, i: u32) -> u32 {
        self.block_start(b) + i
    }

    /// yᵗ of universal source block `b`.
    pub fn y_true(&self, b: u32, i: u32) -> u32 {
        self.block_start(b) + i
    }

    pub fn y_false(&self, b: u32, i: u32) -> u32 {
        self.block_start(b) + self.n + i
    }

    /// sᵢ guarding universal block `b`; lives in the following block.
    pub fn s_i(&self, b: u32, i: u32) -> u32 {
        self.block_start(b + 1) + self.n + i
    }

    pub fn s(&self, b: u32) -> u32 {
        self.block_start(b + 1) + 2 * self.n
    }

    pub fn num_vars(&self) -> u32 {
        self.block_start(2 * self.k - 1) - 1
    }

    pub fn blocks(&self) -> Vec<Vec<u32>> {
        (0..2 * self.k - 1)
            .map(|b| (self.block_start(b)..self.block_start(b + 1)).collect())
            .collect()
    }
}

/// Which source block a literal belongs to and its 0-based position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockTag {
    pub block: u32,
    pub index: u32,
}

/// r(·): existential literals map to their images with the same sign,
/// universal bᵢ ↦ yᵗᵢ and b̄ᵢ ↦ yᶠᵢ (both positive).
pub fn replacement(layout: &Layout, lit: Literal, tag: BlockTag) -> Literal {
    if tag.block % 2 == 1 {
        if lit.neg {
            Literal::pos(layout.y_false(tag.block, tag.index))
        } else {
            Literal::pos(layout.y_true(tag.block, tag.index))
        }
    } else {
        Literal {
            var: layout.existential(tag.block, tag.index),
            neg: lit.neg,
        }
    }
}

fn tags(blocks: &[Vec<u32>], num_vars: u32) -> Vec<Option<BlockTag>> {
    let mut t = vec![None; num_vars as usize + 1];
    for (b, vars) in blocks.iter().enumerate() {
        for (i, &v) in vars.iter().enumerate() {
            t[v as usize] = Some(BlockTag {
                block: b as u32,
                index: i as u32,
            });
        }
    }
    t
}

fn pad_blocks(inst: &KQSatInstance) -> (KQSatInstance, Vec<u32>) {
    let n = inst.blocks.iter().map(|b| b.len()).max().unwrap_or(0);
    let mut next = inst.formula.num_vars + 1;
    let mut added = Vec::new();
    let blocks = inst
        .blocks
        .iter()
        .map(|b| {
            let mut b = b.clone();
            while b.len() < n {
                b.push(next);
                added.push(next);
                next += 1;
            }
            b
        })
        .collect();
    let formula = CnfFormula {
        num_vars: next - 1,
        clauses: inst.formula.clauses.clone(),
    };
    (
        KQSatInstance::new(formula, blocks, inst.k).expect("padding is fresh"),
        added,
    )
}

/// Blockwise construction: every universal block gets its own pairs,
/// pair clauses, selector clause and selector s^j, and every replaced clause
/// carries all selectors. Γ := n.
pub fn reduce_kqsat_to_kradjsat(inst: &KQSatInstance) -> Result<(KStageRAdjSatInstance, Provenance)> {
    let (src, source_padding) = pad_blocks(inst);
    let n = src.blocks[0].len() as u32;
    let layout = Layout { n, k: src.k };
    let tag = tags(&src.blocks, src.formula.num_vars);
    let universal: Vec<u32> = (1..2 * src.k - 1).step_by(2).collect();

    let mut clauses = Vec::new();
    let mut ctags = Vec::new();
    for (ci, c) in src.formula.clauses.iter().enumerate() {
        let mut lits = Vec::with_capacity(c.len() + universal.len());
        for &l in c.literals() {
            let t = tag[l.var as usize].ok_or(Error::UnknownVariable(l.var))?;
            lits.push(replacement(&layout, l, t));
        }
        lits.extend(universal.iter().map(|&b| Literal::pos(layout.s(b))));
        clauses.push(Clause::new(lits));
        ctags.push(ClauseTag {
            family: Family::Replaced,
            source_clause: Some(ci),
            stage: None,
            normalized_from: None,
        });
    }
    let mut selectors = Vec::new();
    for (j, &b) in universal.iter().enumerate() {
        let stage = Some(j as u32 + 1);
        for i in 0..n {
            let si = Literal::neg(layout.s_i(b, i));
            for y in [layout.y_true(b, i), layout.y_false(b, i)] {
                clauses.push(Clause::new([si, Literal::pos(y)]));
                ctags.push(ClauseTag {
                    family: Family::Pair,
                    source_clause: None,
                    stage,
                    normalized_from: None,
                });
            }
        }
        let sel: Vec<u32> = (0..n).map(|i| layout.s_i(b, i)).collect();
        clauses.push(Clause::new(
            std::iter::once(Literal::neg(layout.s(b))).chain(sel.iter().map(|&v| Literal::pos(v))),
        ));
        ctags.push(ClauseTag {
            family: Family::Selector,
            source_clause: None,
            stage,
            normalized_from: None,
        });
        selectors.push((sel, layout.s(b)));
    }

    let mut variables = Vec::new();
    for (b, vars) in src.blocks.iter().enumerate() {
        for (i, &v) in vars.iter().enumerate() {
            let (b, i) = (b as u32, i as u32);
            let images = if b % 2 == 1 {
                vec![layout.y_true(b, i), layout.y_false(b, i)]
            } else {
                vec![layout.existential(b, i)]
            };
            variables.push(VarImage {
                source: v,
                block: b,
                images,
            });
        }
    }
    variables.sort_by_key(|v| v.source);

    let formula = CnfFormula::new(layout.num_vars(), clauses)?;
    let out = KStageRAdjSatInstance::new(formula, layout.blocks(), n, src.k)?;
    Ok((
        out,
        Provenance {
            clauses: ctags,
            variables,
            selectors,
            source_padding,
        },
    ))
}

/// Raw construction: |X| = n, |Y| = 2n, |Z| = 2n+1, ℓ + 2n + 1 clauses, Γ = n.
pub fn reduce_qsat_to_radjsat(inst: &QSatInstance) -> Result<(RAdjSatInstance, Provenance)> {
    let (k, p) = reduce_kqsat_to_kradjsat(&inst.as_kqsat())?;
    Ok((k.as_radjsat().expect("k = 2"), p))
}

/// The raw reduction followed by 3-CNF normalization and block padding.
pub fn reduce_qsat_to_radjsat_3cnf(inst: &QSatInstance) -> Result<(RAdjSatInstance, Provenance)> {
    let (raw, prov) = reduce_qsat_to_radjsat(inst)?;
    let (norm, info) = raw.normalize_to_3cnf();
    let prov = prov.after_normalization(&info.origin, &raw.formula, &norm.formula);
    Ok((norm.pad_partition_equal(), prov))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lits(c: &Clause) -> Vec<i32> {
        c.literals().iter().map(|l| l.to_dimacs()).collect()
    }

    #[test]
    fn replacement_rules() {
        let l = Layout { n: 3, k: 2 };
        let a = replacement(&l, Literal::pos(9), BlockTag { block: 0, index: 1 });
        assert_eq!(a, Literal::pos(2));
        let b = replacement(&l, Literal::neg(9), BlockTag { block: 1, index: 0 });
        assert_eq!(b, Literal::pos(l.y_false(1, 0)));
        assert_eq!(b.var, 7);
        let c = replacement(&l, Literal::neg(9), BlockTag { block: 2, index: 2 });
        assert_eq!(c, Literal::neg(12));
    }

    #[test]
    fn n1_single_clause() {
        let q = QSatInstance::contiguous(1, 1, 1, vec![Clause::from_dimacs(&[1, 2, 3])]).unwrap();
        let (r, p) = reduce_qsat_to_radjsat(&q).unwrap();
        // x1=1, yt=2, yf=3, z=4, s1=5, s=6
        assert_eq!((r.x.clone(), r.y.clone(), r.z.clone(), r.gamma), (vec![1], vec![2, 3], vec![4, 5, 6], 1));
        let got: Vec<Vec<i32>> = r.formula.clauses.iter().map(lits).collect();
        assert_eq!(got, vec![vec![1, 2, 4, 6], vec![2, -5], vec![3, -5], vec![5, -6]]);
        let fam: Vec<Family> = p.clauses.iter().map(|t| t.family).collect();
        assert_eq!(fam, vec![Family::Replaced, Family::Pair, Family::Pair, Family::Selector]);
    }

    #[test]
    fn k1_is_identity() {
        let k = KQSatInstance::contiguous(1, &[2], vec![Clause::from_dimacs(&[1, -2])]).unwrap();
        let (r, _) = reduce_kqsat_to_kradjsat(&k).unwrap();
        assert_eq!(r.formula, k.formula);
        assert_eq!(r.blocks, k.blocks);
    }
}
