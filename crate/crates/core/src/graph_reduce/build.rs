//! G(φ), its blow-up, and the IS / VC instances on top of them.

use std::collections::BTreeMap;

use super::{
    check_source, Construction, GadgetMap, OptionsRecord, RecoveryCosts, Role, Special, ThresholdSense, VcAdversary,
};
use crate::formula::{Literal, RAdjSatInstance};
use crate::rational::q;
use crate::robopt::{CostRecord, CostTriple, Graph, ProblemKind, RobustGraphInstance};
use crate::Result;

/// The classical 3SAT → independent set graph, with every X-literal vertex
/// optionally replaced by `copies` twins.
#[derive(Debug, Clone)]
pub struct GPhi {
    pub graph: Graph,
    pub n: usize,
    pub copies: usize,
    /// DIMACS literal → its vertices.
    pub literals: BTreeMap<i32, Vec<usize>>,
    pub variable_gadgets: BTreeMap<u32, Vec<usize>>,
    pub clause_gadgets: Vec<Vec<usize>>,
    pub clause_literals: Vec<Vec<i32>>,
}

pub fn build_g_phi(inst: &RAdjSatInstance) -> Result<GPhi> {
    g_phi(inst, 1)
}

/// Vertex layout: variables in X, Y, Z order, each as its positive copies
/// followed by its negative copies; then one triangle per clause.
pub(crate) fn g_phi(inst: &RAdjSatInstance, copies: usize) -> Result<GPhi> {
    let n = check_source(inst)?;
    let mut literals = BTreeMap::new();
    let mut variable_gadgets = BTreeMap::new();
    let mut edges = Vec::new();
    let mut next = 0usize;
    for (block, vars) in [&inst.x, &inst.y, &inst.z].into_iter().enumerate() {
        let c = if block == 0 { copies } else { 1 };
        for &v in vars {
            let pos: Vec<usize> = (next..next + c).collect();
            let neg: Vec<usize> = (next + c..next + 2 * c).collect();
            next += 2 * c;
            for &a in &pos {
                for &b in &neg {
                    edges.push((a, b));
                }
            }
            variable_gadgets.insert(v, pos.iter().chain(&neg).copied().collect());
            literals.insert(v as i32, pos);
            literals.insert(-(v as i32), neg);
        }
    }
    let mut clause_gadgets = Vec::new();
    let mut clause_literals = Vec::new();
    let mut matching = Vec::new();
    for clause in &inst.formula.clauses {
        let t: Vec<usize> = (next..next + 3).collect();
        next += 3;
        for p in 0..3 {
            edges.push((t[p].min(t[(p + 1) % 3]), t[p].max(t[(p + 1) % 3])));
        }
        let lits: Vec<i32> = clause.literals().iter().map(|l| l.to_dimacs()).collect();
        for (p, &l) in lits.iter().enumerate() {
            for &u in &literals[&-l] {
                matching.push((u, t[p]));
            }
        }
        clause_gadgets.push(t);
        clause_literals.push(lits);
    }
    edges.extend(matching);
    Ok(GPhi {
        graph: Graph::new(next, edges)?,
        n,
        copies,
        literals,
        variable_gadgets,
        clause_gadgets,
        clause_literals,
    })
}

impl GPhi {
    fn map(&self, construction: Construction, inst: &RAdjSatInstance, sense: ThresholdSense) -> GadgetMap {
        GadgetMap {
            construction,
            n: self.n,
            clauses: self.clause_gadgets.len(),
            gamma: inst.gamma,
            x: inst.x.clone(),
            y: inst.y.clone(),
            z: inst.z.clone(),
            sense,
            threshold: q(0),
            n0: None,
            n1: None,
            literals: self.literals.clone(),
            clause_literals: self.clause_literals.clone(),
            variable_gadgets: self.variable_gadgets.clone(),
            clause_gadgets: self.clause_gadgets.clone(),
            xor_gadgets: vec![],
            special: vec![],
            options: OptionsRecord::default(),
        }
    }

    fn x_vertices(&self, inst: &RAdjSatInstance) -> Vec<usize> {
        let mut v: Vec<usize> = inst.x.iter().flat_map(|x| self.variable_gadgets[x].clone()).collect();
        v.sort_unstable();
        v
    }

    fn lit_vertices(&self, vars: &[u32], neg: bool) -> Vec<usize> {
        let mut v: Vec<usize> = vars
            .iter()
            .flat_map(|&x| self.literals[&Literal { var: x, neg }.to_dimacs()].clone())
            .collect();
        v.sort_unstable();
        v
    }

    fn blowup_sides(&self, inst: &RAdjSatInstance) -> Vec<Special> {
        inst.x
            .iter()
            .flat_map(|&x| {
                [
                    Special { role: Role::BlowupLeft, key: Some(x), items: self.literals[&(x as i32)].clone() },
                    Special { role: Role::BlowupRight, key: Some(x), items: self.literals[&-(x as i32)].clone() },
                ]
            })
            .collect()
    }
}

fn costs_by_class(count: usize, v1: &[usize], v2: &[usize], rows: [CostRecord; 3]) -> CostTriple {
    let mut c = CostTriple::uniform(count, rows[2].first.clone(), rows[2].nominal.clone(), rows[2].deviated.clone());
    for &v in v1 {
        c.set(v, &rows[0]);
    }
    for &v in v2 {
        c.set(v, &rows[1]);
    }
    c
}

fn special(role: Role, items: Vec<usize>) -> Special {
    Special { role, key: None, items }
}

pub(crate) fn two_stage_is(inst: &RAdjSatInstance) -> Result<(RobustGraphInstance, GadgetMap)> {
    let g = g_phi(inst, 1)?;
    let n = g.n as i64;
    let l = g.clause_gadgets.len() as i64;
    let v1 = g.x_vertices(inst);
    let v2 = g.lit_vertices(&inst.y, false);
    let costs = costs_by_class(
        g.graph.num_vertices,
        &v1,
        &v2,
        [CostRecord::ints(1, 0, 0), CostRecord::ints(0, 1, 0), CostRecord::ints(0, 1, 1)],
    );
    let mut map = g.map(Construction::TwoStageIs, inst, ThresholdSense::AtLeast);
    map.threshold = q(3 * n + l);
    map.special = vec![special(Role::FirstStage, v1), special(Role::Adversary, v2)];
    let ri = RobustGraphInstance::new(ProblemKind::TwoStageIs, g.graph, costs, inst.gamma)?;
    Ok((ri, map))
}

/// N₀ = |V(G(φ))|, each X-literal vertex becomes N₀+1 twins, k = 2N₀.
fn blown_up(inst: &RAdjSatInstance) -> Result<(GPhi, usize)> {
    let n0 = g_phi(inst, 1)?.graph.num_vertices;
    Ok((g_phi(inst, n0 + 1)?, n0))
}

pub(crate) fn recoverable_is(inst: &RAdjSatInstance, rc: RecoveryCosts) -> Result<(RobustGraphInstance, GadgetMap)> {
    let (g, n0) = blown_up(inst)?;
    let n = g.n as i64;
    let l = g.clause_gadgets.len() as i64;
    let side = n * (n0 as i64 + 1);
    let v1 = g.x_vertices(inst);
    let v2 = g.lit_vertices(&inst.y, false);
    let (row1, threshold) = match rc {
        RecoveryCosts::Unchanged => (CostRecord::ints(1, 0, 0), 2 * n + side + l),
        RecoveryCosts::PaidRecourse => (CostRecord::ints(1, 1, 1), 2 * n + 2 * side + l),
    };
    let costs = costs_by_class(
        g.graph.num_vertices,
        &v1,
        &v2,
        [row1, CostRecord::ints(0, 1, 0), CostRecord::ints(0, 1, 1)],
    );
    let mut map = g.map(Construction::RecoverableIs, inst, ThresholdSense::AtLeast);
    map.threshold = q(threshold);
    map.n0 = Some(n0);
    // one full side plus everything outside V₁; with N₁ = |V(G₁)| the
    // separation claim fails
    map.n1 = Some(g.graph.num_vertices - side as usize);
    map.options.recovery_costs = rc;
    map.special = vec![special(Role::FirstStage, v1), special(Role::Adversary, v2)];
    map.special.extend(g.blowup_sides(inst));
    let k = 2 * n0 as u32;
    let ri = RobustGraphInstance::recoverable(ProblemKind::RecoverableIs, g.graph, costs, inst.gamma, k)?;
    Ok((ri, map))
}

fn vc_adversary(g: &GPhi, inst: &RAdjSatInstance, adv: VcAdversary) -> Vec<usize> {
    g.lit_vertices(&inst.y, adv == VcAdversary::NegatedY)
}

fn vc_rows() -> [CostRecord; 3] {
    [CostRecord::ints(1, 2, 2), CostRecord::ints(2, 1, 2), CostRecord::ints(2, 1, 1)]
}

pub(crate) fn two_stage_vc(inst: &RAdjSatInstance, adv: VcAdversary) -> Result<(RobustGraphInstance, GadgetMap)> {
    let g = g_phi(inst, 1)?;
    let n = g.n as i64;
    let l = g.clause_gadgets.len() as i64;
    let v1 = g.x_vertices(inst);
    let v2 = vc_adversary(&g, inst, adv);
    let costs = costs_by_class(g.graph.num_vertices, &v1, &v2, vc_rows());
    let mut map = g.map(Construction::TwoStageVc, inst, ThresholdSense::AtMost);
    map.threshold = q(3 * n + 2 * l);
    map.options.vc_adversary = adv;
    map.special = vec![special(Role::FirstStage, v1), special(Role::Adversary, v2)];
    let ri = RobustGraphInstance::new(ProblemKind::TwoStageVc, g.graph, costs, inst.gamma)?;
    Ok((ri, map))
}

/// Yes-instances cost n(N₀+1) + 2(2n+2ℓ) up front and 2n(N₀+1) + (2n+2ℓ)
/// after recovery.
pub(crate) fn recoverable_vc(inst: &RAdjSatInstance, adv: VcAdversary) -> Result<(RobustGraphInstance, GadgetMap)> {
    let (g, n0) = blown_up(inst)?;
    let n = g.n as i64;
    let l = g.clause_gadgets.len() as i64;
    let side = n * (n0 as i64 + 1);
    let v1 = g.x_vertices(inst);
    let v2 = vc_adversary(&g, inst, adv);
    let costs = costs_by_class(g.graph.num_vertices, &v1, &v2, vc_rows());
    let mut map = g.map(Construction::RecoverableVc, inst, ThresholdSense::AtMost);
    map.threshold = q(3 * side + 6 * n + 6 * l);
    map.n0 = Some(n0);
    map.n1 = Some(g.graph.num_vertices - side as usize);
    map.options.vc_adversary = adv;
    map.special = vec![special(Role::FirstStage, v1), special(Role::Adversary, v2)];
    map.special.extend(g.blowup_sides(inst));
    let k = 2 * n0 as u32;
    let ri = RobustGraphInstance::recoverable(ProblemKind::RecoverableVc, g.graph, costs, inst.gamma, k)?;
    Ok((ri, map))
}
