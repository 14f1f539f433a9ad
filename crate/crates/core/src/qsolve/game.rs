//! Generic alternating game over CNF: existential blocks, universal blocks
//! and budgeted zero-forcing attacks.

use std::collections::HashMap;

use rayon::prelude::*;

use super::dpll::{self, lit_value, Status};
use crate::formula::CnfFormula;
use crate::guard;
use crate::Result;

#[derive(Debug, Clone)]
pub(crate) enum Move {
    /// Player assigns every still-unassigned variable of the block.
    Exists(Vec<u32>),
    /// Opponent assigns the block arbitrarily.
    Forall(Vec<u32>),
    /// Opponent forces at most Γ variables of the block to 0.
    Attack(Vec<u32>),
}

const CACHE_CAP: usize = 1 << 16;

#[derive(Clone)]
pub(crate) struct Game<'a> {
    clauses: &'a [Vec<i32>],
    moves: &'a [Move],
    gamma: usize,
    /// Replay mode: attack every subset of the block, no dominance pruning.
    exhaustive: bool,
    cache: HashMap<Vec<i32>, bool>,
}

pub(crate) fn clauses_of(f: &CnfFormula) -> Vec<Vec<i32>> {
    f.clauses
        .iter()
        .map(|c| c.literals().iter().map(|l| l.to_dimacs()).collect())
        .collect()
}

fn clause_open(c: &[i32], vals: &[i8]) -> bool {
    !c.iter().any(|&l| lit_value(vals, l) == 1)
}

/// Unassigned block variables occurring in an open clause (positively only,
/// if `positive`).
fn relevant(clauses: &[Vec<i32>], vals: &[i8], block: &[u32], positive: bool) -> Vec<u32> {
    let mut mark = vec![false; vals.len()];
    for c in clauses.iter().filter(|c| clause_open(c, vals)) {
        for &l in c {
            if (!positive || l > 0) && vals[l.unsigned_abs() as usize] == 0 {
                mark[l.unsigned_abs() as usize] = true;
            }
        }
    }
    block.iter().copied().filter(|&v| mark[v as usize]).collect()
}

/// Calls `f` on every `size`-subset of `items` in lexicographic order;
/// stops early when `f` returns false.
pub(crate) fn for_each_combination<T: Copy>(
    items: &[T],
    size: usize,
    mut f: impl FnMut(&[T]) -> bool,
) -> bool {
    let n = items.len();
    if size > n {
        return true;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    let mut buf = Vec::with_capacity(size);
    loop {
        buf.clear();
        buf.extend(idx.iter().map(|&i| items[i]));
        if !f(&buf) {
            return false;
        }
        let mut i = size;
        while i > 0 && idx[i - 1] == n - size + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return true;
        }
        idx[i - 1] += 1;
        for j in i..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Every subset with at most `k` elements, by size then lexicographically.
pub(crate) fn for_each_subset_upto<T: Copy>(
    items: &[T],
    k: usize,
    mut f: impl FnMut(&[T]) -> bool,
) -> bool {
    (0..=k.min(items.len())).all(|size| for_each_combination(items, size, &mut f))
}

fn set_bits(vals: &mut [i8], vars: &[u32], bits: u64) {
    let c = vars.len();
    for (j, &v) in vars.iter().enumerate() {
        vals[v as usize] = if bits >> (c - 1 - j) & 1 == 1 { 1 } else { -1 };
    }
}

fn clear(vals: &mut [i8], vars: &[u32]) {
    for &v in vars {
        vals[v as usize] = 0;
    }
}

impl<'a> Game<'a> {
    pub(crate) fn new(clauses: &'a [Vec<i32>], moves: &'a [Move], gamma: usize) -> Self {
        Game {
            clauses,
            moves,
            gamma,
            exhaustive: false,
            cache: HashMap::new(),
        }
    }

    pub(crate) fn exhaustive(mut self) -> Self {
        self.exhaustive = true;
        self
    }

    /// Upper bound on enumeration leaves; the final existential block is
    /// handled by DPLL and not counted.
    pub(crate) fn cost(&self, num_vars: usize) -> u128 {
        let vals = vec![0i8; num_vars + 1];
        let mut total: u128 = 1;
        for m in &self.moves[..self.moves.len().saturating_sub(1)] {
            let factor = match m {
                Move::Exists(b) | Move::Forall(b) => {
                    guard::pow2(relevant(self.clauses, &vals, b, false).len())
                }
                Move::Attack(b) => {
                    let n = if self.exhaustive {
                        b.len()
                    } else {
                        relevant(self.clauses, &vals, b, true).len()
                    };
                    guard::subsets_up_to(n, self.gamma)
                }
            };
            total = total.saturating_mul(factor);
        }
        total
    }

    fn leaf(&mut self, vals: &mut [i8]) -> bool {
        let mut key = Vec::new();
        for c in self.clauses.iter().filter(|c| clause_open(c, vals)) {
            key.extend(c.iter().copied().filter(|&l| lit_value(vals, l) == 0));
            key.push(0);
        }
        if let Some(&r) = self.cache.get(&key) {
            return r;
        }
        let r = dpll::satisfiable(self.clauses, vals);
        if self.cache.len() < CACHE_CAP {
            self.cache.insert(key, r);
        }
        r
    }

    pub(crate) fn play(&mut self, level: usize, vals: &mut [i8]) -> bool {
        match dpll::status(self.clauses, vals) {
            Status::Falsified => return false,
            Status::Satisfied => return true,
            Status::Open => {}
        }
        if level + 1 >= self.moves.len() {
            return match self.moves.get(level) {
                Some(Move::Exists(_)) => self.leaf(vals),
                Some(m) => self.terminal(m, vals),
                None => false,
            };
        }
        match &self.moves[level] {
            Move::Exists(b) => {
                let vars = relevant(self.clauses, vals, b, false);
                let mut won = false;
                for bits in 0..1u64 << vars.len() {
                    set_bits(vals, &vars, bits);
                    won = self.play(level + 1, vals);
                    if won {
                        break;
                    }
                }
                clear(vals, &vars);
                won
            }
            Move::Forall(b) => {
                let vars = relevant(self.clauses, vals, b, false);
                let mut won = true;
                for bits in 0..1u64 << vars.len() {
                    set_bits(vals, &vars, bits);
                    won = self.play(level + 1, vals);
                    if !won {
                        break;
                    }
                }
                clear(vals, &vars);
                won
            }
            Move::Attack(b) => {
                let vars = if self.exhaustive {
                    b.iter()
                        .copied()
                        .filter(|&v| vals[v as usize] == 0)
                        .collect()
                } else {
                    relevant(self.clauses, vals, b, true)
                };
                let gamma = self.gamma;
                let mut scratch = vals.to_vec();
                for_each_subset_upto(&vars, gamma, |att| {
                    for &v in att {
                        scratch[v as usize] = -1;
                    }
                    let ok = self.play(level + 1, &mut scratch);
                    for &v in att {
                        scratch[v as usize] = 0;
                    }
                    ok
                })
            }
        }
    }

    /// A universal move in last position: every outcome must leave the
    /// formula satisfied, which only happens if it already is.
    fn terminal(&self, m: &Move, vals: &mut [i8]) -> bool {
        match m {
            Move::Forall(_) | Move::Attack(_) => {
                dpll::status(self.clauses, vals) == Status::Satisfied
            }
            Move::Exists(_) => unreachable!(),
        }
    }
}

/// Outcome of solving a game: whether the first player wins and the
/// lexicographically smallest winning first move (first variable most
/// significant, irrelevant variables 0).
pub(crate) struct Outcome {
    pub won: bool,
    pub first: Option<Vec<(u32, bool)>>,
}

pub(crate) fn solve(f: &CnfFormula, moves: &[Move], gamma: u32, what: &'static str) -> Result<Outcome> {
    let clauses = clauses_of(f);
    let nv = f.num_vars as usize;
    let game = Game::new(&clauses, moves, gamma as usize);
    guard::check(what, game.cost(nv))?;
    let Some(Move::Exists(first)) = moves.first() else {
        let mut vals = vec![0i8; nv + 1];
        let mut g = game;
        return Ok(Outcome {
            won: g.play(0, &mut vals),
            first: None,
        });
    };
    if moves.len() == 1 {
        let mut vals = vec![0i8; nv + 1];
        let won = dpll::model(&clauses, &mut vals);
        let first = won.then(|| first.iter().map(|&v| (v, vals[v as usize] == 1)).collect());
        return Ok(Outcome { won, first });
    }
    let vals0 = vec![0i8; nv + 1];
    let vars = relevant(&clauses, &vals0, first, false);
    let hit = (0..1u64 << vars.len()).into_par_iter().find_first(|&bits| {
        let mut vals = vals0.clone();
        set_bits(&mut vals, &vars, bits);
        let mut g = game.clone();
        g.play(1, &mut vals)
    });
    Ok(match hit {
        None => Outcome {
            won: false,
            first: None,
        },
        Some(bits) => {
            let mut vals = vals0;
            set_bits(&mut vals, &vars, bits);
            Outcome {
                won: true,
                first: Some(first.iter().map(|&v| (v, vals[v as usize] == 1)).collect()),
            }
        }
    })
}

/// Replays a fixed first move against every opponent line (no pruning of
/// attacks).
pub(crate) fn replay(
    f: &CnfFormula,
    moves: &[Move],
    gamma: u32,
    first: &[(u32, bool)],
    what: &'static str,
) -> Result<bool> {
    let clauses = clauses_of(f);
    let nv = f.num_vars as usize;
    let game = Game::new(&clauses, moves, gamma as usize).exhaustive();
    guard::check(what, game.cost(nv))?;
    let mut vals = vec![0i8; nv + 1];
    for &(v, b) in first {
        vals[v as usize] = if b { 1 } else { -1 };
    }
    if let Some(Move::Exists(block)) = moves.first() {
        for &v in block {
            if vals[v as usize] == 0 {
                vals[v as usize] = -1;
            }
        }
    }
    let mut g = game;
    if moves.len() == 1 {
        return Ok(dpll::status(&clauses, &vals) == Status::Satisfied);
    }
    Ok(g.play(1, &mut vals))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_in_order() {
        let mut seen = Vec::new();
        for_each_subset_upto(&[1, 2, 3], 2, |s| {
            seen.push(s.to_vec());
            true
        });
        assert_eq!(
            seen,
            vec![vec![], vec![1], vec![2], vec![3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
    }
}
