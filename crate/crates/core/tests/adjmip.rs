use proptest::prelude::*;
use robredux::adjmip::*;
use robredux::corpus::{exhaustive_radjsat_n2, random_radjsat, rng};
use robredux::formula::{Clause, RAdjSatInstance};
use robredux::qsolve::{solve_radjsat, solve_sat};
use robredux::rational::{frac, q, Q};
use robredux::Error;

fn targeted(t: AttackTarget) -> MipOptions {
    MipOptions { target: t, epsilon: None }
}

fn exact(i: &RAdjSatInstance, t: AttackTarget) -> bool {
    let (mip, _) = build_mip_with(i, &targeted(t)).unwrap();
    check_adjustable_feasibility(&mip).unwrap().feasible
}

/// Clause counts spread from nearly free to mostly unsatisfiable.
fn random_n3(count: usize) -> Vec<RAdjSatInstance> {
    let mut r = rng(23);
    (0..count)
        .map(|i| {
            let l = 3 + i % 28;
            random_radjsat(&mut r, 3, l, 1 + (i % 2) as u32)
        })
        .collect()
}

#[test]
fn paper_epsilon_for_two_variables() {
    let inst = RAdjSatInstance::contiguous(2, 2, 2, 1, vec![Clause::from_dimacs(&[1, 3, 5])]).unwrap();
    let (mip, prov) = build_mip_from_radjsat(&inst).unwrap();
    assert_eq!(mip.epsilon, Some(frac(1, 2)));
    assert_eq!(prov.target, AttackTarget::Z);
    assert_eq!(prov.attacked, vec![5, 6]);
    assert_eq!((mip.x_domain.len(), mip.y_domain.len(), mip.dim_zeta), (2, 4, 2));
    assert_eq!(mip.gamma, q(1));
}

#[test]
fn budget_must_stay_below_n() {
    let inst = RAdjSatInstance::contiguous(1, 1, 1, 1, vec![Clause::from_dimacs(&[1, 2, 3])]).unwrap();
    assert!(matches!(build_mip_from_radjsat(&inst), Err(Error::Precondition(_))));
    let unequal = RAdjSatInstance::contiguous(1, 2, 1, 0, vec![Clause::from_dimacs(&[1, 2, 3])]).unwrap();
    assert!(matches!(build_mip_from_radjsat(&unequal), Err(Error::Precondition(_))));
}

#[test]
fn loose_epsilon_is_refused() {
    let inst = RAdjSatInstance::contiguous(3, 3, 3, 1, vec![Clause::from_dimacs(&[1, 4, 7])]).unwrap();
    // 2 · (1 − 3/4) < 1: two thresholds fit in a unit budget
    let opts = MipOptions { target: AttackTarget::Y, epsilon: Some(frac(3, 4)) };
    assert!(matches!(build_mip_with(&inst, &opts), Err(Error::Precondition(_))));
    let opts = MipOptions { target: AttackTarget::Y, epsilon: Some(frac(1, 2)) };
    assert!(build_mip_with(&inst, &opts).is_ok());
}

#[test]
fn signature_sizes() {
    let inst = RAdjSatInstance::contiguous(3, 3, 3, 1, vec![Clause::from_dimacs(&[1, 4, 7])]).unwrap();
    let opts = MipOptions { target: AttackTarget::Y, epsilon: Some(frac(1, 8)) };
    let (mip, _) = build_mip_with(&inst, &opts).unwrap();
    let sigs = signature_sets(&mip).unwrap();
    assert_eq!(sigs.len(), 4);
    assert!(sigs.iter().all(|s| s.set.len() <= 1 && mip.admits(&s.witness)));

    // Γ = 2 of 3 with ε = 1/6: size-2 signatures, never size 3
    let inst = RAdjSatInstance::contiguous(3, 3, 3, 2, vec![Clause::from_dimacs(&[1, 4, 7])]).unwrap();
    let (mip, _) = build_mip_from_radjsat(&inst).unwrap();
    let sigs = signature_sets(&mip).unwrap();
    assert_eq!(sigs.len(), 1 + 3 + 3);
    for s in &sigs {
        assert!(mip.admits(&s.witness));
        let crossed: Vec<usize> = (0..3).filter(|&i| s.witness[i] > q(1) - frac(1, 6)).collect();
        assert_eq!(crossed, s.set);
    }
}

#[test]
fn zero_budget_is_plain_sat() {
    let unsat: Vec<Clause> = [[1, 3, 5], [1, 3, -5], [1, -3, 5], [1, -3, -5], [-1, 3, 5], [-1, 3, -5], [-1, -3, 5], [-1, -3, -5]]
        .iter()
        .map(|c| Clause::from_dimacs(c))
        .collect();
    let inst = RAdjSatInstance::contiguous(2, 2, 2, 0, unsat).unwrap();
    let (mip, prov) = build_mip_from_radjsat(&inst).unwrap();
    assert!(prov.attack_rows.is_empty() && mip.epsilon.is_none());
    assert!(!check_adjustable_feasibility(&mip).unwrap().feasible);
    for i in exhaustive_radjsat_n2().iter().take(60) {
        let mut i = i.clone();
        i.gamma = 0;
        assert_eq!(exact(&i, AttackTarget::Z), solve_sat(&i.formula).answer);
    }
}

#[test]
fn y_target_matches_source_on_n2_pool() {
    for i in exhaustive_radjsat_n2() {
        assert_eq!(exact(&i, AttackTarget::Y), solve_radjsat(&i).unwrap().answer, "{i:?}");
    }
}

#[test]
fn y_target_matches_source_on_random_n3() {
    let pool = random_n3(100);
    let yes = pool.iter().filter(|i| solve_radjsat(i).unwrap().answer).count();
    assert!((20..=80).contains(&yes), "{yes} yes-instances");
    for i in pool {
        assert_eq!(exact(&i, AttackTarget::Y), solve_radjsat(&i).unwrap().answer, "{i:?}");
    }
}

#[test]
fn z_target_attacks_the_wrong_block() {
    // φ ≡ y₁ (x₁, z₁ in every sign): the adversary zeroes y₁ and wins, but
    // the z′-attack cannot touch y′₁
    let cs: Vec<Clause> = [[1, 3, 5], [1, 3, -5], [-1, 3, 5], [-1, 3, -5]].iter().map(|c| Clause::from_dimacs(c)).collect();
    let i = RAdjSatInstance::contiguous(2, 2, 2, 1, cs).unwrap();
    assert!(!solve_radjsat(&i).unwrap().answer);
    assert!(!exact(&i, AttackTarget::Y));
    assert!(exact(&i, AttackTarget::Z));
    let wrong = random_n3(100)
        .iter()
        .filter(|i| exact(i, AttackTarget::Z) != solve_radjsat(i).unwrap().answer)
        .count();
    assert!(wrong > 0);
}

#[test]
fn robust_first_stage_replays() {
    for i in exhaustive_radjsat_n2().iter().take(80) {
        let (mip, prov) = build_mip_with(i, &targeted(AttackTarget::Y)).unwrap();
        let v = check_adjustable_feasibility(&mip).unwrap();
        if let Some(x) = v.x {
            for s in signature_sets(&mip).unwrap() {
                assert!(inner_feasible(&mip, &x, &s.witness).unwrap().is_some());
            }
            // the x block is the source X in order
            assert_eq!(prov.x_columns.len(), x.len());
        }
    }
}

#[test]
fn sampling_never_refutes_yes_instances() {
    let mut checked = 0;
    for i in exhaustive_radjsat_n2().into_iter().chain(random_n3(100)) {
        let (mip, _) = build_mip_with(&i, &targeted(AttackTarget::Y)).unwrap();
        let yes = check_adjustable_feasibility(&mip).unwrap().feasible;
        let s = check_feasibility_sampled(&mip, 1000, 5).unwrap();
        if yes {
            assert!(!s.found(), "{i:?}");
            checked += 1;
        } else if let Sampled::Counterexample { refutations } = &s {
            // every refutation is a genuine failing scenario
            for (x, z) in refutations {
                assert!(mip.admits(z));
                assert!(inner_feasible(&mip, x, z).unwrap().is_none());
            }
        }
    }
    assert!(checked > 50);
}

#[test]
fn sampled_counterexample_on_a_tight_bound() {
    // y ≤ 1 − ζ₁, y ≥ 1, y continuous, Γ′ = 1
    let mip = AffineRhsMip {
        a: vec![vec![], vec![]],
        b: vec![vec![q(1)], vec![q(-1)]],
        d0: vec![q(1), q(-1)],
        d: vec![vec![q(1), q(0)].into_iter().map(|v: Q| -v).collect(), vec![q(0), q(0)]],
        x_domain: vec![],
        y_domain: vec![Domain::Continuous],
        gamma: q(1),
        dim_zeta: 2,
        epsilon: None,
    };
    match check_feasibility_sampled(&mip, 50, 1).unwrap() {
        Sampled::Counterexample { refutations } => {
            let z = &refutations[0].1;
            assert!(z[0] > q(0) && mip.admits(z));
        }
        other => panic!("{other:?}"),
    }
    let free = AffineRhsMip { a: vec![], b: vec![], d0: vec![], d: vec![], ..mip };
    assert!(!check_feasibility_sampled(&free, 50, 1).unwrap().found());
}

#[test]
fn non_threshold_rows_are_rejected() {
    let mut mip = build_mip_from_radjsat(&RAdjSatInstance::contiguous(2, 2, 2, 1, vec![Clause::from_dimacs(&[1, 3, 5])]).unwrap())
        .unwrap()
        .0;
    mip.d[1][0] = frac(-1, 2);
    assert!(matches!(check_adjustable_feasibility(&mip), Err(Error::Structure(_))));
}

#[test]
fn json_round_trip() {
    let inst = RAdjSatInstance::contiguous(2, 2, 2, 1, vec![Clause::from_dimacs(&[1, -3, 6])]).unwrap();
    let (mip, prov) = build_mip_from_radjsat(&inst).unwrap();
    let text = serde_json::to_string(&mip).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["epsilon"], "1/2");
    assert_eq!(v["D"][1][0], "-1");
    assert_eq!(v["x_domain"][0], "binary");
    assert_eq!(serde_json::from_str::<AffineRhsMip>(&text).unwrap(), mip);
    let p = serde_json::to_string(&prov).unwrap();
    assert_eq!(serde_json::from_str::<MipProvenance>(&p).unwrap(), prov);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shrinking_zeta_keeps_feasibility(seed in 0u64..10_000, a in 0u32..=64, b in 0u32..=64, t in 0u32..=64) {
        let mut r = rng(seed);
        let inst = random_radjsat(&mut r, 3, 6, 2);
        let (mip, _) = build_mip_with(&inst, &targeted(AttackTarget::Y)).unwrap();
        let hi = vec![frac(a as i64, 64), frac(b as i64, 64), q(0)];
        prop_assume!(mip.admits(&hi));
        let lo: Vec<Q> = hi.iter().map(|v| v * frac(t as i64, 64)).collect();
        for bits in 0..8 {
            let x: Vec<Q> = (0..3).map(|j| q((bits >> j & 1) as i64)).collect();
            if inner_feasible(&mip, &x, &hi).unwrap().is_some() {
                prop_assert!(inner_feasible(&mip, &x, &lo).unwrap().is_some());
            }
        }
    }
}
