//! Fixed clause pools and seeded random instance generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{Clause, KQSatInstance, QSatInstance, RAdjSatInstance};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// All 8 sign patterns of (±v₁ ∨ ±v₂ ∨ ±v₃).
pub fn sign_patterns(v1: u32, v2: u32, v3: u32) -> Vec<Clause> {
    (0..8)
        .map(|m| {
            let s = |bit: u32, v: u32| if m >> bit & 1 == 1 { -(v as i32) } else { v as i32 };
            Clause::from_dimacs(&[s(0, v1), s(1, v2), s(2, v3)])
        })
        .collect()
}

/// Every subset of `pool` with at most `max` clauses, in size-then-lex order.
pub fn subsets(pool: &[Clause], max: usize) -> Vec<Vec<Clause>> {
    let mut out = Vec::new();
    let idx: Vec<usize> = (0..pool.len()).collect();
    crate::qsolve::game::for_each_subset_upto(&idx, max, |s| {
        out.push(s.iter().map(|&i| pool[i].clone()).collect());
        true
    });
    out
}

/// ∃∀∃ pool with |A| = |B| = |C| = 1 and ℓ ≤ `max_clauses`.
pub fn exhaustive_qsat_n1(max_clauses: usize) -> Vec<QSatInstance> {
    subsets(&sign_patterns(1, 2, 3), max_clauses)
        .into_iter()
        .map(|cs| QSatInstance::contiguous(1, 1, 1, cs).unwrap())
        .collect()
}

/// R-Adj-SAT pool with |X| = |Y| = |Z| = 1, ℓ ≤ 4 and Γ ∈ {0, 1}
/// (2 · 163 = 326 instances).
pub fn exhaustive_radjsat_n1() -> Vec<RAdjSatInstance> {
    let sets = subsets(&sign_patterns(1, 2, 3), 4);
    let mut out = Vec::with_capacity(2 * sets.len());
    for gamma in [0, 1] {
        for cs in &sets {
            out.push(RAdjSatInstance::contiguous(1, 1, 1, gamma, cs.clone()).unwrap());
        }
    }
    out
}

/// Fixed 8-clause pool over x₁x₂ y₁y₂ z₁z₂ (variables 1–6).
pub fn clause_pool_n2() -> Vec<Clause> {
    [
        [1, 3, 5],
        [-1, 4, 6],
        [2, 3, -5],
        [-2, 4, -6],
        [3, -5, -6],
        [4, 5, 6],
        [1, 2, 3],
        [-1, -4, 5],
    ]
    .iter()
    .map(|c| Clause::from_dimacs(c))
    .collect()
}

/// n = 2, Γ = 1, every subset of [`clause_pool_n2`] with ≤ 4 clauses.
pub fn exhaustive_radjsat_n2() -> Vec<RAdjSatInstance> {
    subsets(&clause_pool_n2(), 4)
        .into_iter()
        .map(|cs| RAdjSatInstance::contiguous(2, 2, 2, 1, cs).unwrap())
        .collect()
}

/// Clause of `width` distinct variables from 1..=num_vars, random signs.
pub fn random_clause<R: Rng>(rng: &mut R, num_vars: u32, width: usize) -> Clause {
    let vars: Vec<u32> = (1..=num_vars).collect();
    let picked: Vec<&u32> = vars.choose_multiple(rng, width.min(vars.len())).collect();
    Clause::new(picked.into_iter().map(|&v| crate::formula::Literal {
        var: v,
        neg: rng.gen_bool(0.5),
    }))
}

/// Random 3-CNF R-Adj-SAT instance with blocks of size n.
pub fn random_radjsat<R: Rng>(rng: &mut R, n: u32, clauses: usize, gamma: u32) -> RAdjSatInstance {
    let cs = (0..clauses).map(|_| random_clause(rng, 3 * n, 3)).collect();
    RAdjSatInstance::contiguous(n, n, n, gamma, cs).unwrap()
}

pub fn random_qsat<R: Rng>(rng: &mut R, n: u32, clauses: usize) -> QSatInstance {
    let cs = (0..clauses).map(|_| random_clause(rng, 3 * n, 3)).collect();
    QSatInstance::contiguous(n, n, n, cs).unwrap()
}

/// Random prenex instance with 2k−1 blocks of size n.
pub fn random_kqsat<R: Rng>(rng: &mut R, k: u32, n: u32, clauses: usize) -> KQSatInstance {
    let blocks = 2 * k - 1;
    let cs = (0..clauses)
        .map(|_| random_clause(rng, blocks * n, 3))
        .collect();
    KQSatInstance::contiguous(k, &vec![n; blocks as usize], cs).unwrap()
}
