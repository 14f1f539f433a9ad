use super::{mask_items, Base, Graph, ItemSet, ProblemKind, RobustGraphInstance, MAX_ITEMS};
use crate::qsolve::game::for_each_subset_upto;
use crate::{guard, Error, Result};

/// All independent sets by branching on the lowest undecided vertex.
pub(crate) fn independent_sets(adj: &[u128]) -> Vec<u128> {
    fn rec(adj: &[u128], v: usize, cur: u128, banned: u128, out: &mut Vec<u128>) {
        if v == adj.len() {
            out.push(cur);
            return;
        }
        rec(adj, v + 1, cur, banned, out);
        if banned >> v & 1 == 0 {
            rec(adj, v + 1, cur | 1 << v, banned | adj[v], out);
        }
    }
    let mut out = Vec::new();
    rec(adj, 0, 0, 0, &mut out);
    out
}

/// Hamilton cycles of Kₙ as item masks; `item_of[u][v]` indexes edges.
fn hamilton_cycles_complete(n: usize, item_of: &[Vec<usize>]) -> Vec<u128> {
    let mut out = Vec::new();
    if n < 3 {
        return out;
    }
    let mut path = vec![0usize];
    let mut used = 1u128;
    fn rec(n: usize, path: &mut Vec<usize>, used: &mut u128, item_of: &[Vec<usize>], out: &mut Vec<u128>) {
        if path.len() == n {
            // each cycle once: orientation with path[1] < last
            if path[1] < path[n - 1] {
                let mut m = 0u128;
                for w in path.windows(2) {
                    m |= 1 << item_of[w[0]][w[1]];
                }
                m |= 1 << item_of[path[n - 1]][0];
                out.push(m);
            }
            return;
        }
        for v in 1..n {
            if *used >> v & 1 == 0 {
                *used |= 1 << v;
                path.push(v);
                rec(n, path, used, item_of, out);
                path.pop();
                *used &= !(1 << v);
            }
        }
    }
    rec(n, &mut path, &mut used, item_of, &mut out);
    out
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |a, b| a.saturating_mul(b))
}

/// Feasible item sets of an instance as bitmasks.
pub fn feasible_masks(inst: &RobustGraphInstance) -> Result<Vec<ItemSet>> {
    if inst.item_count() > MAX_ITEMS {
        return Err(Error::TooLarge {
            what: "bitmask evaluation (items)",
            needed: inst.item_count() as u128,
            limit: MAX_ITEMS as u128,
        });
    }
    let g = &inst.graph;
    match inst.kind.base() {
        Base::IndependentSet | Base::VertexCover => {
            guard::check("feasible sets", guard::pow2(g.num_vertices))?;
            let is = independent_sets(&g.adjacency());
            if inst.kind.base() == Base::IndependentSet {
                Ok(is)
            } else {
                let all = if g.num_vertices == 128 { u128::MAX } else { (1u128 << g.num_vertices) - 1 };
                let mut vc: Vec<u128> = is.into_iter().map(|s| all & !s).collect();
                vc.sort_unstable();
                Ok(vc)
            }
        }
        Base::Tsp => {
            let n = g.num_vertices;
            guard::check("hamilton cycles", factorial(n.saturating_sub(1)))?;
            let mut item_of = vec![vec![usize::MAX; n]; n];
            for (i, &(u, v)) in inst.tsp_items().iter().enumerate() {
                item_of[u][v] = i;
                item_of[v][u] = i;
            }
            Ok(hamilton_cycles_complete(n, &item_of))
        }
    }
}

/// Feasible sets as sorted item lists.
pub fn enumerate_feasible(kind: ProblemKind, graph: &Graph) -> Result<Vec<Vec<usize>>> {
    let inst = RobustGraphInstance {
        kind,
        graph: graph.clone(),
        costs: Default::default(),
        default_cost: None,
        gamma: vec![0],
        k_recover: None,
        stage_costs: vec![],
    };
    Ok(feasible_masks(&inst)?.into_iter().map(mask_items).collect())
}

/// Every scenario (set of deviating items) with at most Γ items, in
/// lexicographic order of the sorted index lists.
pub fn enumerate_scenarios(gamma: u32, item_count: usize) -> Vec<Vec<usize>> {
    let items: Vec<usize> = (0..item_count).collect();
    let mut out = Vec::new();
    for_each_subset_upto(&items, gamma as usize, |s| {
        out.push(s.to_vec());
        true
    });
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::robopt::ProblemKind::*;

    #[test]
    fn small_families() {
        let edge = Graph::new(2, vec![(0, 1)]).unwrap();
        let mut is = enumerate_feasible(TwoStageIs, &edge).unwrap();
        is.sort();
        assert_eq!(is, vec![vec![], vec![0], vec![1]]);
        assert_eq!(enumerate_feasible(TwoStageTsp, &Graph::complete(3)).unwrap(), vec![vec![0, 1, 2]]);
        assert_eq!(enumerate_feasible(TwoStageTsp, &Graph::complete(5)).unwrap().len(), 12);
        let path = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let mut vc = enumerate_feasible(TwoStageVc, &path).unwrap();
        vc.sort();
        assert_eq!(vc, vec![vec![0, 1], vec![0, 1, 2], vec![0, 2], vec![1], vec![1, 2]]);
    }

    #[test]
    fn scenario_counts() {
        assert_eq!(enumerate_scenarios(0, 5), vec![Vec::<usize>::new()]);
        assert_eq!(enumerate_scenarios(9, 4).len(), 16);
        assert_eq!(enumerate_scenarios(2, 6).len() as u128, guard::subsets_up_to(6, 2));
    }
}
