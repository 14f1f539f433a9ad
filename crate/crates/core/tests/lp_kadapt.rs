use proptest::prelude::*;
use robredux::corpus;
use robredux::lp::*;
use robredux::rational::{frac, q, Q};

fn optimum(lp: &RationalLp) -> Option<(Q, Vec<Q>)> {
    match solve_lp(lp).unwrap() {
        LpResult::Optimal { value, point } => Some((value, point)),
        _ => None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Random 2-D LPs in a box: the returned point is feasible, attains the
    /// value, and no grid point does better.
    #[test]
    fn lp_against_grid(rows in prop::collection::vec((-3i64..=3, -3i64..=3, -2i64..=6), 0..5),
                       c in (-3i64..=3, -3i64..=3)) {
        let mut lp = RationalLp::new(Sense::Max, vec![q(c.0), q(c.1)]);
        lp.bounds(0, Some(q(0)), Some(q(4))).bounds(1, Some(q(0)), Some(q(4)));
        for (a, b, r) in &rows {
            lp.leq(vec![q(*a), q(*b)], q(*r));
        }
        let grid: Vec<Vec<Q>> = (0..=24).flat_map(|i| (0..=24).map(move |j| vec![frac(i, 6), frac(j, 6)])).collect();
        let feasible: Vec<&Vec<Q>> = grid.iter().filter(|p| lp.is_feasible_point(p)).collect();
        match optimum(&lp) {
            Some((v, x)) => {
                prop_assert!(lp.is_feasible_point(&x));
                prop_assert_eq!(&v, &(q(c.0) * &x[0] + q(c.1) * &x[1]));
                for p in feasible {
                    prop_assert!(q(c.0) * &p[0] + q(c.1) * &p[1] <= v);
                }
            }
            None => prop_assert!(feasible.is_empty()),
        }
    }
}

fn symmetric() -> ObjectiveUncertaintyProblem {
    ObjectiveUncertaintyProblem {
        first_stage: vec![FirstStage {
            x: vec![],
            second_stage: vec![vec![1, 0], vec![0, 1]],
        }],
        first_cost: vec![],
        nominal: vec![q(1), q(1)],
        deviated: vec![q(2), q(2)],
        gamma: q(1),
    }
}

#[test]
fn adversary_examples() {
    let p = symmetric();
    let ys = &p.first_stage[0].second_stage;
    assert_eq!(adversary_value(ys, &[], &p).unwrap(), frac(3, 2));
    // analytic check at the symmetric point
    let z = vec![frac(1, 2), frac(1, 2)];
    assert_eq!(p.eval(&[], &ys[0], &z).min(p.eval(&[], &ys[1], &z)), frac(3, 2));
    // single candidate: plain LP, the adversary spends the budget on it
    assert_eq!(adversary_value(&ys[..1], &[], &p).unwrap(), q(2));
    let mut p0 = p.clone();
    p0.gamma = q(0);
    assert_eq!(adversary_value(ys, &[], &p0).unwrap(), q(1));
}

#[test]
fn direct_examples() {
    let p = symmetric();
    assert_eq!(rob_direct(&p).unwrap(), frac(3, 2));
    assert_eq!(rob_kadapt(&p, 1).unwrap(), q(2));
    assert_eq!(rob_kadapt(&p, 2).unwrap(), frac(3, 2));
    let mut p0 = p.clone();
    p0.gamma = q(0);
    assert_eq!(rob_direct(&p0).unwrap(), q(1));
}

#[test]
fn theorem_equality_and_monotonicity() {
    let mut rng = corpus::rng(11);
    for _ in 0..100 {
        let p = random_problem(&mut rng);
        let direct = rob_direct(&p).unwrap();
        let n = p.dim();
        assert_eq!(rob_kadapt(&p, n + 1).unwrap(), direct);
        let mut prev: Option<Q> = None;
        for m in 1..=4 {
            let v = rob_kadapt(&p, m).unwrap();
            assert!(v >= direct);
            if let Some(pv) = prev {
                assert!(v <= pv);
            }
            prev = Some(v);
        }
        assert!(smallest_equalizing_m(&p).unwrap() <= n + 1);
    }
}

#[test]
fn adding_candidates_never_increases() {
    let mut rng = corpus::rng(12);
    for _ in 0..50 {
        let p = random_problem(&mut rng);
        let fs = &p.first_stage[0];
        let mut prev: Option<Q> = None;
        for k in 1..=fs.second_stage.len() {
            let v = adversary_value(&fs.second_stage[..k], &fs.x, &p).unwrap();
            if let Some(pv) = &prev {
                assert!(v <= *pv);
            }
            prev = Some(v);
        }
    }
}

#[test]
fn json_round_trip() {
    let p = symmetric();
    let s = serde_json::to_string(&p).unwrap();
    let back: ObjectiveUncertaintyProblem = serde_json::from_str(&s).unwrap();
    assert_eq!(back, p);
}
