//! Robust two-stage, recoverable and K-stage independent set, TSP and
//! vertex cover under discrete budgeted uncertainty, with exact evaluators.

mod eval;
mod feasible;
mod json;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{ExtValue, Q};
use crate::{Error, Result};

pub use eval::{eval_kstage, eval_nominal_two_stage, eval_recoverable, eval_two_stage, first_stage_value};
pub use feasible::{enumerate_feasible, enumerate_scenarios, feasible_masks};

/// Bitmask over items (vertices, or edges of the complete graph for TSP).
pub type ItemSet = u128;
pub const MAX_ITEMS: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    TwoStageIs,
    RecoverableIs,
    TwoStageTsp,
    RecoverableTsp,
    TwoStageVc,
    RecoverableVc,
    KstageIs,
    KstageTsp,
    KstageVc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Base {
    IndependentSet,
    Tsp,
    VertexCover,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    TwoStage,
    Recoverable,
    KStage,
}

impl ProblemKind {
    pub fn base(self) -> Base {
        use ProblemKind::*;
        match self {
            TwoStageIs | RecoverableIs | KstageIs => Base::IndependentSet,
            TwoStageTsp | RecoverableTsp | KstageTsp => Base::Tsp,
            TwoStageVc | RecoverableVc | KstageVc => Base::VertexCover,
        }
    }

    pub fn stage(self) -> Stage {
        use ProblemKind::*;
        match self {
            TwoStageIs | TwoStageTsp | TwoStageVc => Stage::TwoStage,
            RecoverableIs | RecoverableTsp | RecoverableVc => Stage::Recoverable,
            KstageIs | KstageTsp | KstageVc => Stage::KStage,
        }
    }

    pub fn from_parts(base: Base, stage: Stage) -> Self {
        use ProblemKind::*;
        match (base, stage) {
            (Base::IndependentSet, Stage::TwoStage) => TwoStageIs,
            (Base::IndependentSet, Stage::Recoverable) => RecoverableIs,
            (Base::IndependentSet, Stage::KStage) => KstageIs,
            (Base::Tsp, Stage::TwoStage) => TwoStageTsp,
            (Base::Tsp, Stage::Recoverable) => RecoverableTsp,
            (Base::Tsp, Stage::KStage) => KstageTsp,
            (Base::VertexCover, Stage::TwoStage) => TwoStageVc,
            (Base::VertexCover, Stage::Recoverable) => RecoverableVc,
            (Base::VertexCover, Stage::KStage) => KstageVc,
        }
    }

    /// Independent set maximizes; TSP and vertex cover minimize.
    pub fn maximize(self) -> bool {
        self.base() == Base::IndependentSet
    }

    pub fn item_space(self) -> ItemSpace {
        if self.base() == Base::Tsp {
            ItemSpace::Edges
        } else {
            ItemSpace::Vertices
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ItemSpace {
    Vertices,
    Edges,
}

/// Simple undirected graph; edge order is preserved (it fixes item indices
/// of TSP support edges).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub num_vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(num_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        let mut norm = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u == v {
                return Err(Error::invalid(format!("loop at vertex {u}")));
            }
            if u >= num_vertices || v >= num_vertices {
                return Err(Error::invalid(format!("edge ({u},{v}) out of range")));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::invalid(format!("duplicate edge ({},{})", e.0, e.1)));
            }
            norm.push(e);
        }
        Ok(Graph {
            num_vertices,
            edges: norm,
        })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph {
            num_vertices: n,
            edges,
        }
    }

    /// Neighbourhood bitmasks (requires ≤ 128 vertices).
    pub fn adjacency(&self) -> Vec<u128> {
        let mut adj = vec![0u128; self.num_vertices];
        for &(u, v) in &self.edges {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        adj
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let e = (u.min(v), u.max(v));
        self.edges.contains(&e)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostTriple {
    #[serde(with = "crate::rational::serde_q_vec")]
    pub first: Vec<Q>,
    #[serde(with = "crate::rational::serde_q_vec")]
    pub nominal: Vec<Q>,
    #[serde(with = "crate::rational::serde_q_vec")]
    pub deviated: Vec<Q>,
}

impl CostTriple {
    pub fn uniform(len: usize, first: Q, nominal: Q, deviated: Q) -> Self {
        CostTriple {
            first: vec![first; len],
            nominal: vec![nominal; len],
            deviated: vec![deviated; len],
        }
    }

    pub fn len(&self) -> usize {
        self.first.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first.is_empty()
    }

    pub fn push(&mut self, c: &CostRecord) {
        self.first.push(c.first.clone());
        self.nominal.push(c.nominal.clone());
        self.deviated.push(c.deviated.clone());
    }

    pub fn get(&self, i: usize) -> CostRecord {
        CostRecord {
            first: self.first[i].clone(),
            nominal: self.nominal[i].clone(),
            deviated: self.deviated[i].clone(),
        }
    }

    pub fn set(&mut self, i: usize, c: &CostRecord) {
        self.first[i] = c.first.clone();
        self.nominal[i] = c.nominal.clone();
        self.deviated[i] = c.deviated.clone();
    }
}

/// One (C, c̲, c̄) row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostRecord {
    #[serde(with = "crate::rational::serde_q")]
    pub first: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub nominal: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub deviated: Q,
}

impl CostRecord {
    pub fn ints(first: i64, nominal: i64, deviated: i64) -> Self {
        use crate::rational::q;
        CostRecord {
            first: q(first),
            nominal: q(nominal),
            deviated: q(deviated),
        }
    }
}

/// Extra uncertain stage of a K-stage instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCost {
    #[serde(with = "crate::rational::serde_q_vec")]
    pub nominal: Vec<Q>,
    #[serde(with = "crate::rational::serde_q_vec")]
    pub deviated: Vec<Q>,
}

/// Costs are indexed by vertex for IS/VC and by support edge for TSP; the
/// remaining edges of the complete graph carry `default_cost`.
///
/// K-stage instances: stage 0 costs `costs.first`, stage 1 uses
/// `costs.nominal/deviated`, stages 2… come from `stage_costs`; `gamma` holds
/// one budget per uncertain stage (a single entry applies to all).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RobustGraphInstance {
    pub kind: ProblemKind,
    pub graph: Graph,
    pub costs: CostTriple,
    pub default_cost: Option<CostRecord>,
    pub gamma: Vec<u32>,
    pub k_recover: Option<u32>,
    pub stage_costs: Vec<StageCost>,
}

/// Optimal value and a first-stage solution attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobValue {
    pub value: ExtValue,
    pub witness: Option<Vec<usize>>,
}

pub(crate) fn mask_items(m: ItemSet) -> Vec<usize> {
    (0..128).filter(|&i| m >> i & 1 == 1).collect()
}

pub(crate) fn items_mask(items: &[usize]) -> ItemSet {
    items.iter().fold(0, |m, &i| m | 1 << i)
}

impl RobustGraphInstance {
    pub fn new(kind: ProblemKind, graph: Graph, costs: CostTriple, gamma: u32) -> Result<Self> {
        let inst = RobustGraphInstance {
            kind,
            graph,
            costs,
            default_cost: None,
            gamma: vec![gamma],
            k_recover: None,
            stage_costs: vec![],
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Recoverable kinds need k up front.
    pub fn recoverable(kind: ProblemKind, graph: Graph, costs: CostTriple, gamma: u32, k: u32) -> Result<Self> {
        let inst = RobustGraphInstance {
            kind,
            graph,
            costs,
            default_cost: None,
            gamma: vec![gamma],
            k_recover: Some(k),
            stage_costs: vec![],
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn with_recovery(mut self, k: u32) -> Result<Self> {
        self.k_recover = Some(k);
        self.validate()?;
        Ok(self)
    }

    pub fn with_default_cost(mut self, c: CostRecord) -> Result<Self> {
        self.default_cost = Some(c);
        self.validate()?;
        Ok(self)
    }

    pub fn gamma(&self) -> u32 {
        self.gamma[0]
    }

    /// Budget of uncertain stage i ≥ 1.
    pub fn stage_gamma(&self, i: usize) -> u32 {
        *self.gamma.get(i - 1).unwrap_or(&self.gamma[0])
    }

    /// K (number of decision stages).
    pub fn stages(&self) -> usize {
        2 + self.stage_costs.len()
    }

    pub fn item_count(&self) -> usize {
        match self.kind.item_space() {
            ItemSpace::Vertices => self.graph.num_vertices,
            ItemSpace::Edges => self.graph.num_vertices * self.graph.num_vertices.saturating_sub(1) / 2,
        }
    }

    /// Item index → edge of the complete graph: support edges first, then
    /// the remaining pairs in lexicographic order.
    pub fn tsp_items(&self) -> Vec<(usize, usize)> {
        let mut items = self.graph.edges.clone();
        let n = self.graph.num_vertices;
        let support: std::collections::HashSet<(usize, usize)> = items.iter().copied().collect();
        for u in 0..n {
            for v in u + 1..n {
                if !support.contains(&(u, v)) {
                    items.push((u, v));
                }
            }
        }
        items
    }

    /// Cost rows over the full item space.
    pub fn full_costs(&self) -> CostTriple {
        let mut c = self.costs.clone();
        if self.kind.item_space() == ItemSpace::Edges {
            let extra = self.item_count() - self.graph.edges.len();
            if extra > 0 {
                let d = self
                    .default_cost
                    .clone()
                    .expect("validated: default cost present when support is sparse");
                for _ in 0..extra {
                    c.push(&d);
                }
            }
        }
        c
    }

    /// Per-stage (nominal, deviated) for stages 1..K.
    pub fn uncertain_stages(&self) -> Vec<(Vec<Q>, Vec<Q>)> {
        let full = self.full_costs();
        let mut out = vec![(full.nominal, full.deviated)];
        let pad = self.item_count() - self.costs.len();
        for s in &self.stage_costs {
            let (mut n, mut d) = (s.nominal.clone(), s.deviated.clone());
            if pad > 0 {
                let dc = self.default_cost.clone().expect("validated");
                n.extend(std::iter::repeat_n(dc.nominal, pad));
                d.extend(std::iter::repeat_n(dc.deviated, pad));
            }
            out.push((n, d));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let support_items = match self.kind.item_space() {
            ItemSpace::Vertices => self.graph.num_vertices,
            ItemSpace::Edges => self.graph.edges.len(),
        };
        let c = &self.costs;
        if c.first.len() != support_items || c.nominal.len() != support_items || c.deviated.len() != support_items {
            return Err(Error::invalid(format!(
                "cost vectors must have length {support_items}"
            )));
        }
        if self.kind.item_space() == ItemSpace::Edges
            && self.item_count() > support_items
            && self.default_cost.is_none()
        {
            return Err(Error::invalid("sparse TSP support needs a default cost record"));
        }
        if self.gamma.is_empty() {
            return Err(Error::invalid("missing budget"));
        }
        let check_dev = |nom: &[Q], dev: &[Q]| -> Result<()> {
            for (a, b) in nom.iter().zip(dev) {
                let ok = if self.kind.maximize() { b <= a } else { a <= b };
                if !ok {
                    return Err(Error::invalid(
                        "deviation has the wrong sign for the problem sense",
                    ));
                }
            }
            Ok(())
        };
        check_dev(&c.nominal, &c.deviated)?;
        if let Some(d) = &self.default_cost {
            check_dev(std::slice::from_ref(&d.nominal), std::slice::from_ref(&d.deviated))?;
        }
        if c.first.iter().any(|v| v.is_negative()) {
            return Err(Error::invalid("first-stage costs must be nonnegative"));
        }
        match self.kind.stage() {
            Stage::Recoverable if self.k_recover.is_none() => {
                return Err(Error::invalid("recoverable instance needs k_recover"))
            }
            Stage::KStage => {
                if self.stages() > 4 {
                    return Err(Error::invalid("K-stage evaluation supports K ≤ 4"));
                }
                if self.gamma.len() != 1 && self.gamma.len() != self.stages() - 1 {
                    return Err(Error::invalid("need one budget per uncertain stage"));
                }
                for s in &self.stage_costs {
                    if s.nominal.len() != support_items || s.deviated.len() != support_items {
                        return Err(Error::invalid("stage cost length mismatch"));
                    }
                    check_dev(&s.nominal, &s.deviated)?;
                }
            }
            Stage::TwoStage if !self.stage_costs.is_empty() => {
                return Err(Error::invalid("stage_costs only apply to K-stage kinds"))
            }
            _ => {}
        }
        Ok(())
    }

    /// Items whose cost can deviate in stage `stage` (1-based).
    pub fn deviating_items(&self, stage: usize) -> Vec<usize> {
        let (n, d) = &self.uncertain_stages()[stage - 1];
        (0..n.len()).filter(|&i| !(&d[i] - &n[i]).is_zero()).collect()
    }

    /// The K = 2 reading of a two-stage instance.
    pub fn as_kstage(&self) -> Self {
        let mut k = self.clone();
        k.kind = ProblemKind::from_parts(self.kind.base(), Stage::KStage);
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn graph_rejects_bad_edges() {
        assert!(Graph::new(2, vec![(0, 0)]).is_err());
        assert!(Graph::new(2, vec![(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(2, vec![(0, 2)]).is_err());
        assert_eq!(Graph::complete(4).edges.len(), 6);
    }

    #[test]
    fn sense_checked() {
        let g = Graph::new(1, vec![]).unwrap();
        let bad = CostTriple::uniform(1, q(0), q(0), q(1));
        assert!(RobustGraphInstance::new(ProblemKind::TwoStageIs, g.clone(), bad.clone(), 1).is_err());
        assert!(RobustGraphInstance::new(ProblemKind::TwoStageVc, g, bad, 1).is_ok());
    }

    #[test]
    fn tsp_item_order() {
        let g = Graph::new(4, vec![(2, 3), (0, 1)]).unwrap();
        let inst = RobustGraphInstance::new(
            ProblemKind::TwoStageTsp,
            g,
            CostTriple::uniform(2, q(0), q(0), q(0)),
            0,
        )
        .unwrap_err();
        assert!(matches!(inst, Error::InvalidInstance(_)));
        let g = Graph::new(4, vec![(2, 3), (0, 1)]).unwrap();
        let inst = RobustGraphInstance {
            kind: ProblemKind::TwoStageTsp,
            graph: g,
            costs: CostTriple::uniform(2, q(0), q(0), q(0)),
            default_cost: Some(CostRecord::ints(1, 1, 1)),
            gamma: vec![0],
            k_recover: None,
            stage_costs: vec![],
        };
        inst.validate().unwrap();
        assert_eq!(inst.tsp_items()[..3], [(2, 3), (0, 1), (0, 2)]);
        assert_eq!(inst.full_costs().len(), 6);
    }
}
