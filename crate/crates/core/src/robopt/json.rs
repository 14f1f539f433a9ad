//! Wire format: vertices 0-based, rationals as `"p/q"` strings or integers.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{CostRecord, CostTriple, Graph, ItemSpace, ProblemKind, RobustGraphInstance, StageCost};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum GammaWire {
    One(u32),
    Many(Vec<u32>),
}

#[derive(Serialize, Deserialize)]
struct Wire {
    kind: ProblemKind,
    num_vertices: usize,
    edges: Vec<[usize; 2]>,
    item_space: ItemSpace,
    costs: CostTriple,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    default_cost: Option<CostRecord>,
    gamma: GammaWire,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k_recover: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    stage_costs: Vec<StageCost>,
}

impl Serialize for RobustGraphInstance {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Wire {
            kind: self.kind,
            num_vertices: self.graph.num_vertices,
            edges: self.graph.edges.iter().map(|&(u, v)| [u, v]).collect(),
            item_space: self.kind.item_space(),
            costs: self.costs.clone(),
            default_cost: self.default_cost.clone(),
            gamma: if self.gamma.len() == 1 {
                GammaWire::One(self.gamma[0])
            } else {
                GammaWire::Many(self.gamma.clone())
            },
            k_recover: self.k_recover,
            stage_costs: self.stage_costs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RobustGraphInstance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let w = Wire::deserialize(d)?;
        if w.item_space != w.kind.item_space() {
            return Err(D::Error::custom("item_space does not match kind"));
        }
        let graph = Graph::new(w.num_vertices, w.edges.iter().map(|e| (e[0], e[1])).collect())
            .map_err(D::Error::custom)?;
        let inst = RobustGraphInstance {
            kind: w.kind,
            graph,
            costs: w.costs,
            default_cost: w.default_cost,
            gamma: match w.gamma {
                GammaWire::One(g) => vec![g],
                GammaWire::Many(v) => v,
            },
            k_recover: w.k_recover,
            stage_costs: w.stage_costs,
        };
        inst.validate().map_err(D::Error::custom)?;
        Ok(inst)
    }
}
