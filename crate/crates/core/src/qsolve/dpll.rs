//! Plain DPLL with unit propagation over a shared partial assignment.
//!
//! `vals[v]` is 1 (true), -1 (false) or 0 (unassigned).

#[inline]
pub(crate) fn lit_value(vals: &[i8], lit: i32) -> i8 {
    let v = vals[lit.unsigned_abs() as usize];
    if lit < 0 {
        -v
    } else {
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Status {
    Falsified,
    Satisfied,
    Open,
}

pub(crate) fn status(clauses: &[Vec<i32>], vals: &[i8]) -> Status {
    let mut all = true;
    for c in clauses {
        let mut sat = false;
        let mut free = false;
        for &l in c {
            match lit_value(vals, l) {
                1 => {
                    sat = true;
                    break;
                }
                0 => free = true,
                _ => {}
            }
        }
        if !sat {
            if !free {
                return Status::Falsified;
            }
            all = false;
        }
    }
    if all {
        Status::Satisfied
    } else {
        Status::Open
    }
}

fn assign(vals: &mut [i8], trail: &mut Vec<u32>, lit: i32) {
    let v = lit.unsigned_abs();
    vals[v as usize] = if lit < 0 { -1 } else { 1 };
    trail.push(v);
}

fn undo(vals: &mut [i8], trail: &mut Vec<u32>, mark: usize) {
    for v in trail.drain(mark..) {
        vals[v as usize] = 0;
    }
}

/// Returns false on conflict.
fn propagate(clauses: &[Vec<i32>], vals: &mut [i8], trail: &mut Vec<u32>) -> bool {
    loop {
        let mut changed = false;
        for c in clauses {
            let mut unit = 0;
            let mut free = 0;
            let mut sat = false;
            for &l in c {
                match lit_value(vals, l) {
                    1 => {
                        sat = true;
                        break;
                    }
                    0 => {
                        free += 1;
                        unit = l;
                    }
                    _ => {}
                }
            }
            if sat {
                continue;
            }
            match free {
                0 => return false,
                1 => {
                    assign(vals, trail, unit);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return true;
        }
    }
}

/// Branch literal from the shortest open clause.
fn pick(clauses: &[Vec<i32>], vals: &[i8]) -> Option<i32> {
    let mut best: Option<(usize, i32)> = None;
    for c in clauses {
        if c.iter().any(|&l| lit_value(vals, l) == 1) {
            continue;
        }
        let free: Vec<i32> = c.iter().copied().filter(|&l| lit_value(vals, l) == 0).collect();
        if let Some(&l) = free.first() {
            if best.is_none_or(|(n, _)| free.len() < n) {
                best = Some((free.len(), l));
            }
        }
    }
    best.map(|(_, l)| l)
}

fn search(clauses: &[Vec<i32>], vals: &mut [i8], trail: &mut Vec<u32>) -> bool {
    let mark = trail.len();
    if !propagate(clauses, vals, trail) {
        undo(vals, trail, mark);
        return false;
    }
    let Some(l) = pick(clauses, vals) else {
        return true;
    };
    for lit in [l, -l] {
        let m = trail.len();
        assign(vals, trail, lit);
        if search(clauses, vals, trail) {
            return true;
        }
        undo(vals, trail, m);
    }
    undo(vals, trail, mark);
    false
}

/// Satisfiability of `clauses` extending `vals`; `vals` is left unchanged.
pub(crate) fn satisfiable(clauses: &[Vec<i32>], vals: &mut [i8]) -> bool {
    let mut trail = Vec::new();
    let ok = search(clauses, vals, &mut trail);
    undo(vals, &mut trail, 0);
    ok
}

/// Like [`satisfiable`] but leaves a model in `vals` on success.
pub(crate) fn model(clauses: &[Vec<i32>], vals: &mut [i8]) -> bool {
    let mut trail = Vec::new();
    search(clauses, vals, &mut trail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_and_conflicts() {
        let mut vals = vec![0i8; 3];
        assert!(!satisfiable(&[vec![1], vec![-1]], &mut vals));
        assert!(satisfiable(&[vec![1, 2], vec![-1], vec![-2, 1, 2]], &mut vals));
        assert_eq!(vals, vec![0, 0, 0]);
        assert!(model(&[vec![1, 2], vec![-1]], &mut vals));
        assert_eq!(&vals[1..], &[-1, 1]);
    }
}
