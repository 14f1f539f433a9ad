#![allow(dead_code)]

use robredux::formula::{CnfFormula, KQSatInstance, KStageRAdjSatInstance, RAdjSatInstance};

// Truth-table oracles: no propagation, no pruning, no dominance.

fn eval(f: &CnfFormula, vals: &[bool]) -> bool {
    f.eval_dense(vals)
}

fn exists_all(f: &CnfFormula, vals: &mut Vec<bool>, free: &[u32]) -> bool {
    match free.split_first() {
        None => eval(f, vals),
        Some((&v, rest)) => [false, true].iter().any(|&b| {
            vals[v as usize - 1] = b;
            exists_all(f, vals, rest)
        }),
    }
}

fn subsets(items: &[u32], k: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &it in items {
        let mut more = Vec::new();
        for s in &out {
            if s.len() < k {
                let mut t = s.clone();
                t.push(it);
                more.push(t);
            }
        }
        out.extend(more);
    }
    out
}

/// Recursive k-stage game with attacks on whole blocks.
fn kgame(f: &CnfFormula, blocks: &[Vec<u32>], gamma: usize, vals: &mut Vec<bool>, stage: usize, forced: &[u32]) -> bool {
    // assign (previous attack block minus forced) ∪ current odd block
    let mut free: Vec<u32> = Vec::new();
    if stage > 0 {
        free.extend(blocks[2 * stage - 1].iter().filter(|v| !forced.contains(v)));
    }
    free.extend(&blocks[2 * stage]);
    for &v in forced {
        vals[v as usize - 1] = false;
    }
    if 2 * stage + 1 == blocks.len() {
        return exists_all(f, vals, &free);
    }
    let n = free.len();
    (0..1u64 << n).any(|bits| {
        for (j, &v) in free.iter().enumerate() {
            vals[v as usize - 1] = bits >> j & 1 == 1;
        }
        subsets(&blocks[2 * stage + 1], gamma)
            .iter()
            .all(|att| kgame(f, blocks, gamma, vals, stage + 1, att))
    })
}

pub fn brute_kstage(i: &KStageRAdjSatInstance) -> bool {
    let mut vals = vec![false; i.formula.num_vars as usize];
    kgame(&i.formula, &i.blocks, i.gamma as usize, &mut vals, 0, &[])
}

pub fn brute_radjsat(i: &RAdjSatInstance) -> bool {
    brute_kstage(&i.as_kstage())
}

fn qbf(f: &CnfFormula, blocks: &[Vec<u32>], vals: &mut Vec<bool>, level: usize) -> bool {
    if level == blocks.len() {
        return eval(f, vals);
    }
    let b = &blocks[level];
    let mut each = (0..1u64 << b.len()).map(|bits| {
        for (j, &v) in b.iter().enumerate() {
            vals[v as usize - 1] = bits >> j & 1 == 1;
        }
        qbf(f, blocks, vals, level + 1)
    });
    if level.is_multiple_of(2) {
        each.any(|x| x)
    } else {
        each.all(|x| x)
    }
}

pub fn brute_kqsat(i: &KQSatInstance) -> bool {
    let mut vals = vec![false; i.formula.num_vars as usize];
    qbf(&i.formula, &i.blocks, &mut vals, 0)
}
