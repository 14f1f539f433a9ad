//! TSP constructions: XOR ladders spliced into a variable chain, clause
//! triangles and a clique on S.

use std::collections::{BTreeMap, VecDeque};

use super::{check_source, Construction, GadgetMap, OptionsRecord, Role, Special, ThresholdSense, XorRecord};
use crate::formula::RAdjSatInstance;
use crate::rational::q;
use crate::robopt::{CostRecord, CostTriple, Graph, ProblemKind, RobustGraphInstance};
use crate::Result;

/// A 12-vertex ladder joining host edges (a,b) and (a′,b′): rows
/// a–p₁–p₂–p₃–p₄–b and a′–q₁–q₂–q₃–q₄–b′, rungs pᵢ–rᵢ–qᵢ. Any Hamilton
/// cycle crosses it either from a to b (top mode, the top host counts as
/// used) or from a′ to b′, never both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XorGadget {
    /// p₁..p₄, q₁..q₄, r₁..r₄.
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    /// Indices into `edges` used exactly in top mode.
    pub top_only: Vec<usize>,
    pub bottom_only: Vec<usize>,
}

/// Ladder on fresh vertices `first..first+12`; host endpoints are sorted so
/// the splice orientation is deterministic.
pub fn build_xor_gadget(first: usize, top: (usize, usize), bottom: (usize, usize)) -> XorGadget {
    let (a, b) = (top.0.min(top.1), top.0.max(top.1));
    let (a2, b2) = (bottom.0.min(bottom.1), bottom.0.max(bottom.1));
    let p: Vec<usize> = (first..first + 4).collect();
    let qv: Vec<usize> = (first + 4..first + 8).collect();
    let r: Vec<usize> = (first + 8..first + 12).collect();
    let edges = vec![
        (a, p[0]),
        (p[0], p[1]),
        (p[1], p[2]),
        (p[2], p[3]),
        (p[3], b),
        (a2, qv[0]),
        (qv[0], qv[1]),
        (qv[1], qv[2]),
        (qv[2], qv[3]),
        (qv[3], b2),
        (p[0], r[0]),
        (r[0], qv[0]),
        (p[1], r[1]),
        (r[1], qv[1]),
        (p[2], r[2]),
        (r[2], qv[2]),
        (p[3], r[3]),
        (r[3], qv[3]),
    ];
    XorGadget {
        vertices: (first..first + 12).collect(),
        edges,
        // a–p₁, q₁–q₂, p₂–p₃, q₃–q₄, p₄–b
        top_only: vec![0, 6, 2, 8, 4],
        bottom_only: vec![5, 1, 7, 3, 9],
    }
}

/// Position of p₂–p₃ in `top_only`: kept out of the proxy pools of Y so the
/// adversary has an edge of its own.
const RESERVED: usize = 2;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Owner {
    Var(u32),
    Clause(usize),
}

struct Ladder {
    lit: i32,
    owner: Owner,
    items: Vec<usize>,
    top_only: Vec<usize>,
    bottom_only: Vec<usize>,
}

#[derive(Default)]
struct Builder {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    alive: Vec<bool>,
    ladders: Vec<Ladder>,
    pools: BTreeMap<i32, VecDeque<usize>>,
}

impl Builder {
    fn vertex(&mut self) -> usize {
        self.vertices += 1;
        self.vertices - 1
    }

    fn edge(&mut self, u: usize, v: usize) -> usize {
        self.edges.push((u.min(v), u.max(v)));
        self.alive.push(true);
        self.edges.len() - 1
    }

    fn ladder(&mut self, top: (usize, usize), bottom: (usize, usize), lit: i32, owner: Owner) -> usize {
        let g = build_xor_gadget(self.vertices, top, bottom);
        self.vertices += 12;
        let items: Vec<usize> = g.edges.iter().map(|&(u, v)| self.edge(u, v)).collect();
        self.ladders.push(Ladder {
            lit,
            owner,
            top_only: g.top_only.iter().map(|&i| items[i]).collect(),
            bottom_only: g.bottom_only.iter().map(|&i| items[i]).collect(),
            items,
        });
        self.ladders.len() - 1
    }

    /// Takes the oldest proxy edge of `lit` out of the graph.
    fn pop_proxy(&mut self, lit: i32) -> (usize, usize) {
        let e = self.pools.get_mut(&lit).and_then(|p| p.pop_front()).expect("pools never run dry");
        self.alive[e] = false;
        self.edges[e]
    }

    fn push_proxies(&mut self, lit: i32, edges: &[usize]) {
        self.pools.entry(lit).or_default().extend(edges.iter().copied());
    }
}

struct Built {
    graph: Graph,
    e1: Vec<usize>,
    e2: Vec<usize>,
    map: GadgetMap,
}

/// `extra` X-ladders per X variable (recoverable variant) are attached
/// between its positive and negative proxies.
fn construct(inst: &RAdjSatInstance, construction: Construction, extra: usize) -> Result<Built> {
    let n = check_source(inst)?;
    let mut b = Builder::default();
    let s_top = b.vertex();
    let s_bot = b.vertex();
    let vars: Vec<u32> = inst.x.iter().chain(&inst.y).chain(&inst.z).copied().collect();
    let c: Vec<usize> = (0..=vars.len()).map(|_| b.vertex()).collect();
    let chain = vec![b.edge(s_top, c[0]), b.edge(c[vars.len()], s_bot)];
    let mut var_ladder = BTreeMap::new();
    for (j, &v) in vars.iter().enumerate() {
        let id = b.ladder((c[j], c[j + 1]), (c[j], c[j + 1]), v as i32, Owner::Var(v));
        let mut top = b.ladders[id].top_only.clone();
        if inst.y.contains(&v) {
            top.remove(RESERVED);
        }
        let bottom = b.ladders[id].bottom_only.clone();
        b.push_proxies(v as i32, &top);
        b.push_proxies(-(v as i32), &bottom);
        var_ladder.insert(v, id);
    }
    let e2: Vec<usize> = inst.y.iter().map(|y| b.ladders[var_ladder[y]].top_only[RESERVED]).collect();

    let mut s = vec![s_top, s_bot];
    let mut clause_literals = Vec::new();
    for (j, clause) in inst.formula.clauses.iter().enumerate() {
        let t = [b.vertex(), b.vertex(), b.vertex()];
        s.extend(t);
        let lits: Vec<i32> = clause.literals().iter().map(|l| l.to_dimacs()).collect();
        for (p, &l) in lits.iter().enumerate() {
            let host = b.pop_proxy(l);
            let id = b.ladder(host, (t[p], t[(p + 1) % 3]), l, Owner::Clause(j));
            let top = b.ladders[id].top_only.clone();
            b.push_proxies(l, &top);
        }
        clause_literals.push(lits);
    }
    for &x in &inst.x {
        for _ in 0..extra {
            let top = b.pop_proxy(x as i32);
            let bottom = b.pop_proxy(-(x as i32));
            let id = b.ladder(top, bottom, x as i32, Owner::Var(x));
            let (t, bo) = (b.ladders[id].top_only.clone(), b.ladders[id].bottom_only.clone());
            b.push_proxies(x as i32, &t);
            b.push_proxies(-(x as i32), &bo);
        }
    }
    let mut clique = Vec::new();
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            clique.push(b.edge(s[i], s[j]));
        }
    }

    // compact away the replaced proxies
    let mut remap = vec![usize::MAX; b.edges.len()];
    let mut edges = Vec::new();
    for (i, &e) in b.edges.iter().enumerate() {
        if b.alive[i] {
            remap[i] = edges.len();
            edges.push(e);
        }
    }
    let live = |v: &[usize]| -> Vec<usize> { v.iter().filter(|&&i| b.alive[i]).map(|&i| remap[i]).collect() };
    let is_x = |lit: i32| inst.x.contains(&lit.unsigned_abs());

    let mut variable_gadgets: BTreeMap<u32, Vec<usize>> = vars.iter().map(|&v| (v, vec![])).collect();
    let mut clause_gadgets = vec![vec![]; inst.formula.clauses.len()];
    let mut xor_gadgets = Vec::new();
    let mut e1 = Vec::new();
    for l in &b.ladders {
        let items = live(&l.items);
        match l.owner {
            Owner::Var(v) => variable_gadgets.get_mut(&v).unwrap().extend(&items),
            Owner::Clause(j) => clause_gadgets[j].extend(&items),
        }
        if is_x(l.lit) {
            e1.extend(&items);
        }
        xor_gadgets.push(XorRecord {
            lit: l.lit,
            items,
            top_only: live(&l.top_only),
            bottom_only: live(&l.bottom_only),
        });
    }
    e1.sort_unstable();
    let e2: Vec<usize> = live(&e2);
    let special = vec![
        Special { role: Role::Chain, key: None, items: live(&chain) },
        Special { role: Role::CliqueS, key: None, items: live(&clique) },
        Special { role: Role::FirstStage, key: None, items: e1.clone() },
        Special { role: Role::Adversary, key: None, items: e2.clone() },
    ];
    let map = GadgetMap {
        construction,
        n,
        clauses: inst.formula.clauses.len(),
        gamma: inst.gamma,
        x: inst.x.clone(),
        y: inst.y.clone(),
        z: inst.z.clone(),
        sense: ThresholdSense::AtMost,
        threshold: q(0),
        n0: None,
        n1: None,
        literals: BTreeMap::new(),
        clause_literals,
        variable_gadgets,
        clause_gadgets,
        xor_gadgets,
        special,
        options: OptionsRecord::default(),
    };
    Ok(Built { graph: Graph::new(b.vertices, edges)?, e1, e2, map })
}

fn costs(count: usize, e1: &[usize], e2: &[usize], rows: [CostRecord; 3]) -> CostTriple {
    let mut c = CostTriple::uniform(count, rows[2].first.clone(), rows[2].nominal.clone(), rows[2].deviated.clone());
    for &e in e1 {
        c.set(e, &rows[0]);
    }
    for &e in e2 {
        c.set(e, &rows[1]);
    }
    c
}

/// Edges of K_V outside the support cost (1, 1, 1).
fn sparse(kind: ProblemKind, graph: Graph, costs: CostTriple, gamma: u32, k: Option<u32>) -> Result<RobustGraphInstance> {
    let inst = RobustGraphInstance {
        kind,
        graph,
        costs,
        default_cost: Some(CostRecord::ints(1, 1, 1)),
        gamma: vec![gamma],
        k_recover: k,
        stage_costs: vec![],
    };
    inst.validate()?;
    Ok(inst)
}

pub(crate) fn two_stage_tsp(inst: &RAdjSatInstance) -> Result<(RobustGraphInstance, GadgetMap)> {
    let bt = construct(inst, Construction::TwoStageTsp, 0)?;
    let c = costs(
        bt.graph.edges.len(),
        &bt.e1,
        &bt.e2,
        [CostRecord::ints(0, 1, 1), CostRecord::ints(1, 0, 1), CostRecord::ints(1, 0, 0)],
    );
    let ri = sparse(ProblemKind::TwoStageTsp, bt.graph, c, inst.gamma, None)?;
    Ok((ri, bt.map))
}

/// N₀ is the vertex count of the two-stage graph; each X variable gets N₀+1
/// extra ladders so that flipping it moves a tour by more than k = 2N₀.
pub(crate) fn recoverable_tsp(inst: &RAdjSatInstance) -> Result<(RobustGraphInstance, GadgetMap)> {
    let n0 = construct(inst, Construction::TwoStageTsp, 0)?.graph.num_vertices;
    let mut bt = construct(inst, Construction::RecoverableTsp, n0 + 1)?;
    bt.map.n0 = Some(n0);
    let c = costs(
        bt.graph.edges.len(),
        &[],
        &bt.e2,
        [CostRecord::ints(0, 0, 0), CostRecord::ints(0, 0, 1), CostRecord::ints(0, 0, 0)],
    );
    let k = 2 * n0 as u32;
    let ri = sparse(ProblemKind::RecoverableTsp, bt.graph, c, inst.gamma, Some(k))?;
    Ok((ri, bt.map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Clause;

    #[test]
    fn minimal_counts() {
        let inst = RAdjSatInstance::contiguous(1, 1, 1, 0, vec![Clause::from_dimacs(&[1, 2, 3])]).unwrap();
        let bt = construct(&inst, Construction::TwoStageTsp, 0).unwrap();
        assert_eq!(bt.graph.num_vertices, 81);
        // 6 ladders · 18 + 2 chain + C(5,2) clique − 3 replaced proxies
        assert_eq!(bt.graph.edges.len(), 6 * 18 + 2 + 10 - 3);
        assert_eq!(bt.e2.len(), 1);
        assert_eq!(bt.map.xor_gadgets.len(), 6);
        bt.map.check_partition(bt.graph.edges.len()).unwrap();
    }
}
