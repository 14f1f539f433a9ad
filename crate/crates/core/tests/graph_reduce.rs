use proptest::prelude::*;
use rand::Rng;
use robredux::corpus::{exhaustive_radjsat_n1, random_radjsat, rng};
use robredux::formula::{Clause, CnfFormula, RAdjSatInstance};
use robredux::graph_reduce::hamilton::Hamilton;
use robredux::graph_reduce::mwis::maximal_independent_sets;
use robredux::graph_reduce::*;
use robredux::qsolve::{solve_radjsat, solve_sat};
use robredux::rational::{q, ExtValue};
use robredux::robopt::{eval_two_stage, CostRecord, RobustGraphInstance};

fn inst(n: u32, gamma: u32, clauses: &[&[i32]]) -> RAdjSatInstance {
    RAdjSatInstance::contiguous(n, n, n, gamma, clauses.iter().map(|c| Clause::from_dimacs(c)).collect()).unwrap()
}

/// ∀y: (x∨y∨z)(x∨y∨¬z)(¬x∨y∨z)(¬x∨y∨¬z) with y forced to 0 is unsatisfiable.
fn no_instance() -> RAdjSatInstance {
    inst(1, 1, &[&[1, 2, 3], &[1, 2, -3], &[-1, 2, 3], &[-1, 2, -3]])
}

fn yes_instance() -> RAdjSatInstance {
    inst(1, 1, &[&[1, 2, 3]])
}

fn repaired() -> Options {
    Options { recovery_costs: RecoveryCosts::PaidRecourse, ..Default::default() }
}

/// Independent sets by plain subset enumeration.
fn brute_max_is(adj: &[u128]) -> u32 {
    let n = adj.len();
    (0u64..1 << n)
        .filter(|&s| (0..n).all(|v| s >> v & 1 == 0 || (adj[v] as u64) & s == 0))
        .map(|s| s.count_ones())
        .max()
        .unwrap()
}

/// Random n = 2 instances, half yes and half no.
fn balanced_n2(seed: u64, each: usize) -> Vec<RAdjSatInstance> {
    let mut r = rng(seed);
    let (mut yes, mut no) = (0, 0);
    let mut out = Vec::new();
    while yes + no < 2 * each {
        let l = r.gen_range(6..=20);
        let g = r.gen_range(1..=2);
        let i = random_radjsat(&mut r, 2, l, g);
        let a = solve_radjsat(&i).unwrap().answer;
        if a && yes < each {
            yes += 1;
            out.push(i);
        } else if !a && no < each {
            no += 1;
            out.push(i);
        }
    }
    out
}

// ---------------- G(φ) ----------------

#[test]
fn g_phi_counts() {
    let g = build_g_phi(&yes_instance()).unwrap();
    assert_eq!(g.graph.num_vertices, 9);
    assert_eq!(g.graph.edges.len(), 9);
    let empty = inst(2, 0, &[]);
    let g = build_g_phi(&empty).unwrap();
    assert_eq!(g.graph.num_vertices, 12);
    assert_eq!(g.graph.edges.len(), 6);
    assert!(build_g_phi(&inst(1, 0, &[&[1, 2]])).is_err());
    let uneven = RAdjSatInstance::contiguous(1, 2, 1, 0, vec![Clause::from_dimacs(&[1, 2, 3])]).unwrap();
    assert!(build_g_phi(&uneven).is_err());
}

#[test]
fn max_independent_set_tracks_satisfiability() {
    for i in exhaustive_radjsat_n1().iter().filter(|i| i.gamma == 0) {
        let g = build_g_phi(i).unwrap();
        let target = 3 + i.formula.clauses.len() as u32;
        let sat = solve_sat(&i.formula).answer;
        let best = brute_max_is(&g.graph.adjacency());
        if sat {
            assert_eq!(best, target);
        } else {
            assert!(best < target);
        }
    }
}

#[test]
fn is_instance_is_covered_by_3n_plus_l_cliques() {
    let i = inst(2, 1, &[&[1, 3, 5], &[-2, 4, -6], &[1, -4, 6]]);
    let (ri, map) = build_two_stage_is(&i).unwrap();
    let parts: Vec<&Vec<usize>> = map.variable_gadgets.values().chain(map.clause_gadgets.iter()).collect();
    assert_eq!(parts.len(), 3 * 2 + 3);
    for p in &parts {
        for (a, &u) in p.iter().enumerate() {
            for &v in &p[a + 1..] {
                assert!(ri.graph.has_edge(u, v));
            }
        }
    }
    map.check_partition(ri.graph.num_vertices).unwrap();
}

// ---------------- cost tables ----------------

fn row(ri: &RobustGraphInstance, i: usize) -> CostRecord {
    ri.costs.get(i)
}

#[test]
fn independent_set_cost_rows() {
    let (ri, map) = build_two_stage_is(&yes_instance()).unwrap();
    assert_eq!(map.items_with(Role::FirstStage), vec![0, 1]);
    assert_eq!(map.items_with(Role::Adversary), vec![2]);
    assert_eq!(row(&ri, 0), CostRecord::ints(1, 0, 0));
    assert_eq!(row(&ri, 2), CostRecord::ints(0, 1, 0));
    for v in 3..9 {
        assert_eq!(row(&ri, v), CostRecord::ints(0, 1, 1));
    }
    assert_eq!(map.threshold, q(4));
    assert_eq!(ri.gamma(), 1);
}

#[test]
fn vertex_cover_cost_rows() {
    let (ri, map) = build_two_stage_vc(&yes_instance()).unwrap();
    assert_eq!(row(&ri, 0), CostRecord::ints(1, 2, 2));
    // the adversary sits on ȳ
    assert_eq!(map.items_with(Role::Adversary), vec![3]);
    assert_eq!(row(&ri, 3), CostRecord::ints(2, 1, 2));
    assert_eq!(row(&ri, 2), CostRecord::ints(2, 1, 1));
    assert_eq!(map.threshold, q(3 + 2));
}

#[test]
fn tsp_cost_rows() {
    let (ri, map) = build_two_stage_tsp(&yes_instance()).unwrap();
    let e1 = map.items_with(Role::FirstStage);
    let e2 = map.items_with(Role::Adversary);
    assert_eq!(e2.len(), 1);
    assert_eq!(row(&ri, e1[0]), CostRecord::ints(0, 1, 1));
    assert_eq!(row(&ri, e2[0]), CostRecord::ints(1, 0, 1));
    let other = (0..ri.costs.len()).find(|e| !e1.contains(e) && !e2.contains(e)).unwrap();
    assert_eq!(row(&ri, other), CostRecord::ints(1, 0, 0));
    assert_eq!(ri.default_cost, Some(CostRecord::ints(1, 1, 1)));
    assert_eq!(map.threshold, q(0));

    let (ri, map) = build_recoverable_tsp(&yes_instance()).unwrap();
    let e2 = map.items_with(Role::Adversary);
    assert_eq!(row(&ri, e2[0]), CostRecord::ints(0, 0, 1));
    assert_eq!(row(&ri, 0), CostRecord::ints(0, 0, 0));
}

#[test]
fn adversary_only_touches_v2_or_e2() {
    let i = inst(2, 1, &[&[1, 3, 5], &[-2, 4, -6], &[2, -3, 6]]);
    for c in Construction::ALL {
        let (ri, map) = build(c, &i, &Options::default()).unwrap();
        let adv = map.items_with(Role::Adversary);
        for e in 0..ri.costs.len() {
            let r = row(&ri, e);
            assert_eq!(r.nominal != r.deviated, adv.contains(&e), "{c:?} item {e}");
        }
    }
}

// ---------------- deciders vs oracles ----------------

#[test]
fn two_stage_is_decider_equals_naive_eval() {
    for i in exhaustive_radjsat_n1() {
        let (ri, map) = build_two_stage_is(&i).unwrap();
        let naive = eval_two_stage(&ri).unwrap().value;
        assert_eq!(structured_value(&ri, &map).unwrap(), naive);
        assert_eq!(decide_reduced(&ri, &map).unwrap(), map.meets(&naive));
    }
}

#[test]
fn two_stage_vc_decider_equals_naive_eval() {
    for i in exhaustive_radjsat_n1() {
        let (ri, map) = build_two_stage_vc(&i).unwrap();
        let naive = eval_two_stage(&ri).unwrap().value;
        assert_eq!(structured_value(&ri, &map).unwrap(), naive);
    }
}

#[test]
fn every_builder_matches_the_source_verdict_on_the_n1_pool() {
    for i in exhaustive_radjsat_n1() {
        let truth = solve_radjsat(&i).unwrap().answer;
        for c in Construction::ALL {
            let (ri, map) = build(c, &i, &repaired()).unwrap();
            assert_eq!(decide_reduced(&ri, &map).unwrap(), truth, "{c:?} on {i:?}");
        }
    }
}

#[test]
fn every_builder_matches_the_source_verdict_on_random_n2() {
    for i in balanced_n2(11, 100) {
        let truth = solve_radjsat(&i).unwrap().answer;
        for c in Construction::ALL {
            let (ri, map) = build(c, &i, &repaired()).unwrap();
            assert_eq!(decide_reduced(&ri, &map).unwrap(), truth, "{c:?}");
        }
    }
}

#[test]
fn corrupted_first_stage_costs_flip_the_verdict() {
    let f = CnfFormula::from_dimacs(3, &[&[1, 2], &[-1, 3]]).unwrap();
    let src = RAdjSatInstance::new(f, vec![1], vec![2, 3], vec![], 1).unwrap();
    let src = src.normalize_to_3cnf().0.pad_partition_equal();
    assert!(!solve_radjsat(&src).unwrap().answer);
    let (mut ri, map) = build_two_stage_is(&src).unwrap();
    assert!(!decide_reduced(&ri, &map).unwrap());
    for v in map.items_with(Role::FirstStage) {
        ri.costs.set(v, &CostRecord::ints(1, 1, 1));
    }
    assert!(decide_reduced(&ri, &map).unwrap());
}

#[test]
fn positive_y_adversary_breaks_vertex_cover() {
    let opts = Options { vc_adversary: VcAdversary::PositiveY, ..Default::default() };
    let wrong = exhaustive_radjsat_n1()
        .into_iter()
        .filter(|i| {
            let (ri, map) = build(Construction::TwoStageVc, i, &opts).unwrap();
            decide_reduced(&ri, &map).unwrap() != solve_radjsat(i).unwrap().answer
        })
        .count();
    assert!(wrong > 0);
}

#[test]
fn decider_rejects_foreign_maps() {
    let (ri, mut map) = build_two_stage_is(&yes_instance()).unwrap();
    map.construction = Construction::TwoStageVc;
    assert!(decide_reduced(&ri, &map).is_err());
    let (ri, mut map) = build_two_stage_is(&yes_instance()).unwrap();
    map.special.retain(|s| s.role != Role::Adversary);
    assert!(decide_reduced(&ri, &map).is_err());
    let (ri, mut map) = build_two_stage_is(&yes_instance()).unwrap();
    map.clause_gadgets.clear();
    assert!(decide_reduced(&ri, &map).is_err());
}

// ---------------- blow-up ----------------

#[test]
fn blowup_sizes() {
    let (ri, map) = build_recoverable_is(&yes_instance()).unwrap();
    assert_eq!(map.n0, Some(9));
    assert_eq!(ri.k_recover, Some(18));
    assert_eq!(ri.gamma(), 1);
    assert_eq!(map.variable_gadgets[&1].len(), 20);
    let left = &map.special_for(Role::BlowupLeft, 1).unwrap().items;
    let right = &map.special_for(Role::BlowupRight, 1).unwrap().items;
    for &u in left {
        for &v in right {
            assert!(ri.graph.has_edge(u, v));
        }
    }
    assert_eq!(map.threshold, q(2 + 10 + 1));
    let (_, map) = build_recoverable_vc(&yes_instance()).unwrap();
    assert_eq!(map.threshold, q(3 * 10 + 6 + 6));
}

#[test]
fn maximal_sets_take_one_full_side() {
    let (ri, map) = build_recoverable_is(&yes_instance()).unwrap();
    let adj = ri.graph.adjacency();
    let all = (1u128 << ri.graph.num_vertices) - 1;
    let mask = |v: &[usize]| v.iter().fold(0u128, |m, &i| m | 1 << i);
    let left = mask(&map.special_for(Role::BlowupLeft, 1).unwrap().items);
    let right = mask(&map.special_for(Role::BlowupRight, 1).unwrap().items);
    let sets = maximal_independent_sets(&adj, all);
    assert!(!sets.is_empty());
    for s in sets {
        assert!((s & left == left) ^ (s & right == right));
    }
}

/// With x in both polarities, clause vertices can block both sides, so some
/// maximal sets hold no V₁ vertex and separation only holds among sets that
/// take a full side.
#[test]
fn side_free_maximal_sets_break_unrestricted_separation() {
    let (ri, map) = build_recoverable_is(&inst(1, 0, &[&[1, 2, 3], &[-1, 2, 3]])).unwrap();
    let adj = ri.graph.adjacency();
    let all = (1u128 << ri.graph.num_vertices) - 1;
    let m = |v: &[usize]| v.iter().fold(0u128, |m, &i| m | 1 << i);
    let left = m(&map.special_for(Role::BlowupLeft, 1).unwrap().items);
    let right = m(&map.special_for(Role::BlowupRight, 1).unwrap().items);
    let v1 = m(&map.items_with(Role::FirstStage));
    let need = (map.n1.unwrap() - map.n0.unwrap()) as u32;
    let sets = maximal_independent_sets(&adj, all);
    let free: Vec<u128> = sets.iter().copied().filter(|s| s & v1 == 0).collect();
    assert!(free.len() >= 2);
    assert!((free[0] & free[1]).count_ones() < need);
    let sided: Vec<u128> = sets.into_iter().filter(|s| s & left == left || s & right == right).collect();
    for a in &sided {
        for b in &sided {
            assert_eq!((a & b).count_ones() >= need, a & v1 == b & v1);
        }
    }
}

#[test]
fn blowup_separation_uses_vertices_outside_v1() {
    let (ri, map) = build_recoverable_is(&yes_instance()).unwrap();
    let adj = ri.graph.adjacency();
    let all = (1u128 << ri.graph.num_vertices) - 1;
    let v1 = map.items_with(Role::FirstStage).iter().fold(0u128, |m, &i| m | 1 << i);
    let sets = maximal_independent_sets(&adj, all);
    let n0 = map.n0.unwrap() as i64;
    let n1 = map.n1.unwrap() as i64;
    let literal_n1 = ri.graph.num_vertices as i64;
    let mut literal_fails = false;
    for a in &sets {
        for b in &sets {
            let common = (a & b).count_ones() as i64;
            let agree = a & v1 == b & v1;
            assert_eq!(common >= n1 - n0, agree);
            literal_fails |= (common >= literal_n1 - n0) != agree;
        }
    }
    assert!(literal_fails);
}

/// With the unchanged costs, V₁ is worth nothing in recovery, so dropping a
/// whole side (N₀+1 ≤ 2N₀ changes) frees every clause that mentions x.
#[test]
fn unchanged_recovery_costs_accept_a_no_instance() {
    let src = no_instance();
    assert!(!solve_radjsat(&src).unwrap().answer);
    let (ri, map) = build_recoverable_is(&src).unwrap();
    assert!(decide_reduced(&ri, &map).unwrap());

    // explicit certificate: x = the x-side; for each attack a recovery y
    let adj = ri.graph.adjacency();
    let k = ri.k_recover.unwrap();
    let left = map.special_for(Role::BlowupLeft, 1).unwrap().items.clone();
    let x: u128 = left.iter().fold(0, |m, &i| m | 1 << i);
    let v1: u128 = map.items_with(Role::FirstStage).iter().fold(0, |m, &i| m | 1 << i);
    let w: Vec<usize> = (0..ri.graph.num_vertices).filter(|v| v1 >> v & 1 == 0).collect();
    let cx: i64 = left.len() as i64;
    let adv = map.items_with(Role::Adversary);
    for attack in [vec![], adv.clone()] {
        let value = |v: usize| {
            let r = row(&ri, v);
            if attack.contains(&v) { r.deviated } else { r.nominal }
        };
        let mut best = (q(-1), 0u128);
        for bits in 0u64..1 << w.len() {
            let y: u128 = w.iter().enumerate().filter(|(j, _)| bits >> j & 1 == 1).fold(0, |m, (_, &v)| m | 1 << v);
            if (0..128).any(|v| y >> v & 1 == 1 && adj[v] & y != 0) {
                continue;
            }
            let val = (0..128).filter(|v| y >> v & 1 == 1).map(&value).sum();
            if val > best.0 {
                best = (val, y);
            }
        }
        let y = best.1;
        assert!((x ^ y).count_ones() <= k);
        assert!(q(cx) + best.0 >= map.threshold);
    }
}

#[test]
fn paid_recourse_rejects_it() {
    let (ri, map) = build(Construction::RecoverableIs, &no_instance(), &repaired()).unwrap();
    assert_eq!(map.threshold, q(2 + 2 * 19 + 4));
    assert!(!decide_reduced(&ri, &map).unwrap());
}

// ---------------- XOR ladders and TSP ----------------

fn ladder_graph(extra: &[(usize, usize)]) -> (usize, Vec<(usize, usize)>, XorGadget) {
    let g = build_xor_gadget(4, (0, 1), (2, 3));
    let mut edges = g.edges.clone();
    edges.extend_from_slice(extra);
    (16, edges, g)
}

fn cycles(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    Hamilton::new(n, edges)
        .for_each(&vec![None; edges.len()], |c| {
            out.push(c.to_vec());
            true
        })
        .unwrap();
    out
}

fn mode(g: &XorGadget, c: &[usize]) -> Option<bool> {
    let top = g.top_only.iter().all(|e| c.contains(e)) && g.bottom_only.iter().all(|e| !c.contains(e));
    let bottom = g.bottom_only.iter().all(|e| c.contains(e)) && g.top_only.iter().all(|e| !c.contains(e));
    match (top, bottom) {
        (true, false) => Some(true),
        (false, true) => Some(false),
        _ => None,
    }
}

#[test]
fn xor_ladder_has_twelve_vertices() {
    let g = build_xor_gadget(10, (0, 1), (2, 3));
    assert_eq!(g.vertices, (10..22).collect::<Vec<_>>());
    assert_eq!(g.edges.len(), 18);
}

#[test]
fn xor_ladder_both_hosts_used_is_not_traversable() {
    let (n, e, _) = ladder_graph(&[(1, 2), (3, 0)]);
    assert!(cycles(n, &e).is_empty());
}

#[test]
fn xor_ladder_exactly_one_host_used_is_traversable() {
    let (n, e, g) = ladder_graph(&[(1, 2), (2, 3), (3, 0)]);
    let cs = cycles(n, &e);
    assert!(!cs.is_empty());
    assert!(cs.iter().all(|c| mode(&g, c) == Some(true)));
    let (n, e, g) = ladder_graph(&[(3, 0), (0, 1), (1, 2)]);
    let cs = cycles(n, &e);
    assert!(!cs.is_empty());
    assert!(cs.iter().all(|c| mode(&g, c) == Some(false)));
    let (n, e, g) = ladder_graph(&[(0, 1), (1, 2), (2, 3), (3, 0)]);
    assert!(cycles(n, &e).iter().all(|c| mode(&g, c).is_some()));
}

#[test]
fn variable_ladder_has_two_traversals() {
    let g = build_xor_gadget(3, (0, 1), (0, 1));
    let mut e = g.edges.clone();
    e.extend([(1, 2), (0, 2)]);
    let cs = cycles(15, &e);
    assert_eq!(cs.len(), 2);
    assert_ne!(mode(&g, &cs[0]), mode(&g, &cs[1]));
}

#[test]
fn tsp_threshold_on_yes_and_no_instances() {
    for c in [Construction::TwoStageTsp, Construction::RecoverableTsp] {
        let (ri, map) = build(c, &yes_instance(), &Options::default()).unwrap();
        assert!(decide_reduced(&ri, &map).unwrap());
        let (ri, map) = build(c, &no_instance(), &Options::default()).unwrap();
        assert!(!decide_reduced(&ri, &map).unwrap());
    }
}

#[test]
fn tsp_two_stage_graph_size() {
    let (ri, map) = build_two_stage_tsp(&yes_instance()).unwrap();
    assert_eq!(ri.graph.num_vertices, 81);
    assert_eq!(map.xor_gadgets.len(), 6);
    map.check_partition(ri.costs.len()).unwrap();
}

#[test]
fn recoverable_tsp_multiplies_x_gadgets() {
    let (ri, map) = build_recoverable_tsp(&yes_instance()).unwrap();
    let n0 = map.n0.unwrap();
    assert_eq!(n0, 81);
    assert_eq!(ri.k_recover, Some(2 * n0 as u32));
    // the variable ladder, one per X occurrence, plus N₀+1 extras
    let x_ladders = map.xor_gadgets.iter().filter(|g| g.lit.unsigned_abs() == 1).count();
    assert_eq!(x_ladders, 1 + 1 + (n0 + 1));
    assert_eq!(ri.graph.num_vertices, n0 + 12 * (n0 + 1));
}

/// Tours within Hamming distance 2N₀ never disagree on an X ladder.
#[test]
fn recoverable_tsp_close_tours_agree_on_x() {
    let (ri, map) = build_recoverable_tsp(&yes_instance()).unwrap();
    let m = ri.graph.edges.len();
    let k = ri.k_recover.unwrap() as usize;
    let x_ladders: Vec<&XorRecord> = map.xor_gadgets.iter().filter(|g| g.lit.unsigned_abs() == 1).collect();
    let mut tours: Vec<(bool, Vec<usize>)> = Vec::new();
    for truth in [false, true] {
        let mut fixed = vec![None; m];
        // earlier ladders lose their edges to nested proxies; the last one
        // added keeps all of them
        let var = x_ladders.iter().rfind(|g| g.lit == 1).unwrap();
        assert_eq!((var.top_only.len(), var.bottom_only.len()), (5, 5));
        let on = if truth { &var.top_only } else { &var.bottom_only };
        for &e in on {
            fixed[e] = Some(true);
        }
        let mut found = 0;
        Hamilton::new(ri.graph.num_vertices, &ri.graph.edges)
            .for_each(&fixed, |c| {
                let mut c = c.to_vec();
                c.sort_unstable();
                tours.push((truth, c));
                found += 1;
                found < 25
            })
            .unwrap();
        assert!(found > 0);
    }
    for (t, c) in &tours {
        for g in &x_ladders {
            // lit = ±1: top mode iff the literal is true
            let (on, off) = if *t == (g.lit > 0) { (&g.top_only, &g.bottom_only) } else { (&g.bottom_only, &g.top_only) };
            assert!(on.iter().all(|e| c.binary_search(e).is_ok()));
            assert!(off.iter().all(|e| c.binary_search(e).is_err()));
        }
    }
    for (ta, a) in &tours {
        for (tb, b) in &tours {
            let d = 2 * a.iter().filter(|e| b.binary_search(e).is_err()).count();
            assert_eq!(d <= k, ta == tb);
        }
    }
}

#[test]
fn vertex_cover_nominal_size() {
    for i in exhaustive_radjsat_n1().iter().filter(|i| i.gamma == 0) {
        let g = build_g_phi(i).unwrap();
        let l = i.formula.clauses.len() as u32;
        let min_cover = g.graph.num_vertices as u32 - brute_max_is(&g.graph.adjacency());
        if solve_sat(&i.formula).answer {
            assert_eq!(min_cover, 2 * l + 3);
        } else {
            assert!(min_cover > 2 * l + 3);
        }
    }
}

#[test]
fn gadget_map_json_round_trip() {
    for c in Construction::ALL {
        let (_, map) = build(c, &yes_instance(), &Options::default()).unwrap();
        let text = serde_json::to_string(&map).unwrap();
        let back: GadgetMap = serde_json::from_str(&text).unwrap();
        assert_eq!(back, map);
    }
    let (_, map) = build_recoverable_is(&yes_instance()).unwrap();
    let text = serde_json::to_string(&map).unwrap();
    for tag in ["\"blowup_left\"", "\"blowup_right\"", "\"recoverable_is\""] {
        assert!(text.contains(tag));
    }
    let (_, map) = build_two_stage_tsp(&yes_instance()).unwrap();
    assert!(serde_json::to_string(&map).unwrap().contains("\"clique_S\""));
}

#[test]
fn structured_value_matches_threshold_reading() {
    let (ri, map) = build_two_stage_is(&yes_instance()).unwrap();
    assert_eq!(structured_value(&ri, &map).unwrap(), ExtValue::Finite(q(4)));
    let (ri, map) = build_recoverable_vc(&yes_instance()).unwrap();
    assert!(map.meets(&structured_value(&ri, &map).unwrap()));
    let (ri, map) = build_two_stage_tsp(&yes_instance()).unwrap();
    assert!(structured_value(&ri, &map).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn maps_partition_items_and_localize_the_adversary(seed in any::<u64>(), n in 1u32..=2, l in 0usize..=5, gamma in 0u32..=2) {
        let i = random_radjsat(&mut rng(seed), n, l, gamma);
        for c in Construction::ALL {
            let (ri, map) = build(c, &i, &Options::default()).unwrap();
            prop_assert!(map.check_partition(ri.costs.len()).is_ok());
            let adv = map.items_with(Role::Adversary);
            prop_assert_eq!(adv.len(), n as usize);
            for e in 0..ri.costs.len() {
                let r = ri.costs.get(e);
                prop_assert_eq!(r.nominal != r.deviated, adv.contains(&e));
            }
            prop_assert_eq!(map.clause_gadgets.len(), l);
        }
    }
}
