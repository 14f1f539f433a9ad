use super::{Clause, CnfFormula, Literal};

/// Result of [`normalize_to_3cnf`]: the rewritten formula, fresh helper
/// variables (numbered after the originals) and, for each output clause,
/// the index of the input clause it came from.
#[derive(Debug, Clone)]
pub struct Normalized {
    pub formula: CnfFormula,
    pub helpers: Vec<u32>,
    pub origin: Vec<usize>,
}

/// Rewrites every clause into clauses of exactly three distinct literals.
///
/// * `(a)`       → 4 clauses over 2 helpers (all sign patterns of h, h′)
/// * `(a ∨ b)`   → `(a∨b∨h) ∧ (a∨b∨¬h)`
/// * `(l₁…l_k)`  → chain `(l₁∨l₂∨h₁)(¬h₁∨l₃∨h₂)…(¬h_{k−3}∨l_{k−1}∨l_k)`
pub fn normalize_to_3cnf(formula: &CnfFormula) -> Normalized {
    let mut next = formula.num_vars + 1;
    let mut helpers = Vec::new();
    let mut fresh = || {
        let v = next;
        next += 1;
        helpers.push(v);
        v
    };
    let mut clauses = Vec::new();
    let mut origin = Vec::new();
    for (ci, c) in formula.clauses.iter().enumerate() {
        let l = c.literals();
        let before = clauses.len();
        match l.len() {
            1 => {
                let (h, g) = (fresh(), fresh());
                for (nh, ng) in [(false, false), (false, true), (true, false), (true, true)] {
                    clauses.push(Clause::new([
                        l[0],
                        Literal { var: h, neg: nh },
                        Literal { var: g, neg: ng },
                    ]));
                }
            }
            2 => {
                let h = fresh();
                clauses.push(Clause::new([l[0], l[1], Literal::pos(h)]));
                clauses.push(Clause::new([l[0], l[1], Literal::neg(h)]));
            }
            3 => clauses.push(c.clone()),
            k => {
                let mut h = fresh();
                clauses.push(Clause::new([l[0], l[1], Literal::pos(h)]));
                for &lit in &l[2..k - 2] {
                    let h2 = fresh();
                    clauses.push(Clause::new([Literal::neg(h), lit, Literal::pos(h2)]));
                    h = h2;
                }
                clauses.push(Clause::new([Literal::neg(h), l[k - 2], l[k - 1]]));
            }
        }
        origin.extend(std::iter::repeat_n(ci, clauses.len() - before));
    }
    Normalized {
        formula: CnfFormula {
            num_vars: next - 1,
            clauses,
        },
        helpers,
        origin,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// ∃ helpers: φ'(orig, h) for every assignment of the originals.
    fn equisat(orig: &CnfFormula, norm: &Normalized) {
        let n = orig.num_vars as usize;
        let h = norm.helpers.len();
        for a in 0u32..(1 << n) {
            let mut vals: Vec<bool> = (0..n).map(|i| a >> i & 1 == 1).collect();
            let want = orig.eval_dense(&vals);
            vals.resize(n + h, false);
            let got = (0u32..(1 << h)).any(|b| {
                for j in 0..h {
                    vals[n + j] = b >> j & 1 == 1;
                }
                norm.formula.eval_dense(&vals)
            });
            assert_eq!(want, got, "assignment {a:b}");
        }
    }

    #[test]
    fn three_literals_untouched() {
        let f = CnfFormula::from_dimacs(3, &[&[1, -2, 3]]).unwrap();
        let n = normalize_to_3cnf(&f);
        assert!(n.helpers.is_empty());
        assert_eq!(n.formula.clauses, f.clauses);
    }

    #[test]
    fn long_clause_chain() {
        let f = CnfFormula::from_dimacs(5, &[&[1, 2, -3, 4, 5]]).unwrap();
        let n = normalize_to_3cnf(&f);
        assert_eq!(n.helpers.len(), 2);
        assert_eq!(n.formula.clauses.len(), 3);
        assert!(n.formula.clauses.iter().all(|c| c.len() == 3));
        equisat(&f, &n);
    }

    #[test]
    fn unit_and_binary() {
        let f = CnfFormula::from_dimacs(2, &[&[1], &[-1, 2]]).unwrap();
        let n = normalize_to_3cnf(&f);
        assert_eq!(n.helpers.len(), 3);
        assert_eq!(n.formula.clauses.len(), 6);
        assert_eq!(n.origin, vec![0, 0, 0, 0, 1, 1]);
        assert!(n.formula.clauses.iter().all(|c| c.len() == 3));
        equisat(&f, &n);
    }
}
