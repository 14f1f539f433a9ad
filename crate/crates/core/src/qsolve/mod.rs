//! Exact solvers for SAT, ∃∀∃-SAT, R-Adj-SAT and its k-stage variant.
//!
//! Attacks are restricted to variables that still occur positively in an
//! unsatisfied clause: forcing any other variable to 0 is something the
//! player would do voluntarily, so the restriction loses nothing.

pub(crate) mod dpll;
pub(crate) mod game;

use serde::{Deserialize, Serialize};

use crate::formula::{Assignment, CnfFormula, KQSatInstance, KStageRAdjSatInstance, QSatInstance, RAdjSatInstance};
use crate::Result;
use game::Move;


#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub answer: bool,
    pub witness_first_stage: Option<Assignment>,
}

impl Verdict {
    fn from_outcome(o: game::Outcome) -> Self {
        Verdict {
            answer: o.won,
            witness_first_stage: o.first.map(Assignment::from_pairs),
        }
    }
}

/// Satisfiability with a full model as witness.
pub fn solve_sat(formula: &CnfFormula) -> Verdict {
    let all: Vec<u32> = (1..=formula.num_vars).collect();
    let moves = [Move::Exists(all)];
    Verdict::from_outcome(game::solve(formula, &moves, 0, "sat").expect("no enumeration"))
}

fn kstage_moves(blocks: &[Vec<u32>]) -> Vec<Move> {
    let mut moves = vec![Move::Exists(blocks[0].clone())];
    for pair in blocks[1..].chunks(2) {
        moves.push(Move::Attack(pair[0].clone()));
        let mut next = pair[0].clone();
        next.extend(&pair[1]);
        moves.push(Move::Exists(next));
    }
    moves
}

fn qbf_moves(blocks: &[Vec<u32>]) -> Vec<Move> {
    blocks
        .iter()
        .enumerate()
        .map(|(i, b)| {
            if i % 2 == 0 {
                Move::Exists(b.clone())
            } else {
                Move::Forall(b.clone())
            }
        })
        .collect()
}

pub fn solve_qsat(inst: &QSatInstance) -> Result<Verdict> {
    let moves = qbf_moves(&[inst.a.clone(), inst.b.clone(), inst.c.clone()]);
    game::solve(&inst.formula, &moves, 0, "qsat").map(Verdict::from_outcome)
}

/// Nested ∃∀…∃ oracle for prenex CNF with 2k−1 alternating blocks.
pub fn solve_kqsat(inst: &KQSatInstance) -> Result<Verdict> {
    game::solve(&inst.formula, &qbf_moves(&inst.blocks), 0, "kqsat").map(Verdict::from_outcome)
}

pub fn solve_radjsat(inst: &RAdjSatInstance) -> Result<Verdict> {
    let moves = kstage_moves(&[inst.x.clone(), inst.y.clone(), inst.z.clone()]);
    game::solve(&inst.formula, &moves, inst.gamma, "radjsat").map(Verdict::from_outcome)
}

pub fn solve_kstage(inst: &KStageRAdjSatInstance) -> Result<Verdict> {
    game::solve(&inst.formula, &kstage_moves(&inst.blocks), inst.gamma, "kstage")
        .map(Verdict::from_outcome)
}

fn pairs(a: &Assignment) -> Vec<(u32, bool)> {
    a.values.iter().map(|(&v, &b)| (v, b)).collect()
}

/// Re-checks a first-stage witness against every attack Y′ ⊆ Y, |Y′| ≤ Γ.
/// X-variables missing from the witness are taken as 0.
pub fn replay_radjsat(inst: &RAdjSatInstance, witness: &Assignment) -> Result<bool> {
    let moves = kstage_moves(&[inst.x.clone(), inst.y.clone(), inst.z.clone()]);
    game::replay(&inst.formula, &moves, inst.gamma, &pairs(witness), "radjsat replay")
}

pub fn replay_kstage(inst: &KStageRAdjSatInstance, witness: &Assignment) -> Result<bool> {
    let moves = kstage_moves(&inst.blocks);
    game::replay(&inst.formula, &moves, inst.gamma, &pairs(witness), "kstage replay")
}

pub fn replay_qsat(inst: &QSatInstance, witness: &Assignment) -> Result<bool> {
    let moves = qbf_moves(&[inst.a.clone(), inst.b.clone(), inst.c.clone()]);
    game::replay(&inst.formula, &moves, 0, &pairs(witness), "qsat replay")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Clause;

    fn cl(v: &[i32]) -> Clause {
        Clause::from_dimacs(v)
    }

    #[test]
    fn sat_basics() {
        assert!(solve_sat(&CnfFormula::new(0, vec![]).unwrap()).answer);
        let f = CnfFormula::from_dimacs(1, &[&[1], &[-1]]).unwrap();
        assert!(!solve_sat(&f).answer);
    }

    #[test]
    fn radjsat_small() {
        let i = RAdjSatInstance::contiguous(0, 1, 0, 1, vec![cl(&[1])]).unwrap();
        assert!(!solve_radjsat(&i).unwrap().answer);
        let i = RAdjSatInstance::contiguous(0, 2, 0, 1, vec![cl(&[1, 2])]).unwrap();
        assert!(solve_radjsat(&i).unwrap().answer);
        // a zeroed variable can help via its negative literal
        let i = RAdjSatInstance::contiguous(0, 1, 0, 1, vec![cl(&[-1])]).unwrap();
        assert!(solve_radjsat(&i).unwrap().answer);
    }

    #[test]
    fn qsat_witness() {
        let q = QSatInstance::contiguous(1, 1, 0, vec![cl(&[1, 2]), cl(&[1, -2])]).unwrap();
        let v = solve_qsat(&q).unwrap();
        assert!(v.answer);
        assert_eq!(v.witness_first_stage.unwrap().get(1), Some(true));
    }

    #[test]
    fn kstage_k1_is_sat() {
        let k = KStageRAdjSatInstance::contiguous(1, 0, &[2], vec![cl(&[1]), cl(&[-1, 2])]).unwrap();
        let v = solve_kstage(&k).unwrap();
        assert!(v.answer);
        assert!(replay_kstage(&k, v.witness_first_stage.as_ref().unwrap()).unwrap());
    }
}
