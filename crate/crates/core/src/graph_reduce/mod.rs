//! Gadget reductions from R-Adj-SAT to robust independent set, TSP and
//! vertex cover, and threshold deciders that exploit the gadget structure.

mod build;
mod decide;
pub mod hamilton;
pub mod mwis;
mod tsp;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::formula::RAdjSatInstance;
use crate::rational::Q;
use crate::robopt::RobustGraphInstance;
use crate::{Error, Result};

pub use build::{build_g_phi, GPhi};
pub use decide::{decide_reduced, structured_value};
pub use tsp::{build_xor_gadget, XorGadget};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    TwoStageIs,
    RecoverableIs,
    TwoStageTsp,
    RecoverableTsp,
    TwoStageVc,
    RecoverableVc,
}

impl Construction {
    pub const ALL: [Construction; 6] = [
        Construction::TwoStageIs,
        Construction::RecoverableIs,
        Construction::TwoStageTsp,
        Construction::RecoverableTsp,
        Construction::TwoStageVc,
        Construction::RecoverableVc,
    ];
}

/// How the threshold is read: IS wants Rob ≥ τ, TSP and VC want Rob ≤ τ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdSense {
    AtLeast,
    AtMost,
}

/// Second-stage costs of the blown-up X vertices in recoverable IS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecoveryCosts {
    /// The costs of the two-stage construction: c̲ = c̄ = 0 on V₁.
    #[default]
    Unchanged,
    /// c̲ = c̄ = 1 on V₁, so recourse cannot profit from dropping a side.
    PaidRecourse,
}

/// Which literal vertex of a Y-gadget carries the adversary's deviation in
/// the vertex cover constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VcAdversary {
    /// ȳᵢ: a cover must then omit ȳᵢ, i.e. yᵢ is false.
    #[default]
    NegatedY,
    /// yᵢ itself.
    PositiveY,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    pub recovery_costs: RecoveryCosts,
    pub vc_adversary: VcAdversary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    #[serde(rename = "variable")]
    Variable,
    #[serde(rename = "clause")]
    Clause,
    #[serde(rename = "xor")]
    Xor,
    #[serde(rename = "clique_S")]
    CliqueS,
    #[serde(rename = "blowup_left")]
    BlowupLeft,
    #[serde(rename = "blowup_right")]
    BlowupRight,
    #[serde(rename = "chain")]
    Chain,
    /// V₁ / E₁: items worth buying only in the first stage.
    #[serde(rename = "first_stage")]
    FirstStage,
    /// V₂ / E₂: the only items whose cost can deviate.
    #[serde(rename = "adversary")]
    Adversary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Special {
    pub role: Role,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key: Option<u32>,
    pub items: Vec<usize>,
}

/// One XOR ladder (TSP): in every Hamilton cycle either all `top_only`
/// edges or all `bottom_only` edges are used; the top mode holds exactly
/// when literal `lit` is true.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XorRecord {
    pub lit: i32,
    pub items: Vec<usize>,
    pub top_only: Vec<usize>,
    pub bottom_only: Vec<usize>,
}

/// Where every piece of a reduced instance came from. Items are vertices
/// (IS, VC) or support-edge indices (TSP).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetMap {
    pub construction: Construction,
    pub n: usize,
    pub clauses: usize,
    pub gamma: u32,
    pub x: Vec<u32>,
    pub y: Vec<u32>,
    pub z: Vec<u32>,
    pub sense: ThresholdSense,
    #[serde(with = "crate::rational::serde_q")]
    pub threshold: Q,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n0: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n1: Option<usize>,
    /// Literal (DIMACS) → its vertices (IS/VC only; several after blow-up).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub literals: BTreeMap<i32, Vec<usize>>,
    /// Literals of each clause, in gadget order.
    pub clause_literals: Vec<Vec<i32>>,
    pub variable_gadgets: BTreeMap<u32, Vec<usize>>,
    pub clause_gadgets: Vec<Vec<usize>>,
    pub xor_gadgets: Vec<XorRecord>,
    pub special: Vec<Special>,
    #[serde(default)]
    pub options: OptionsRecord,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OptionsRecord {
    pub recovery_costs: RecoveryCosts,
    pub vc_adversary: VcAdversary,
}

impl GadgetMap {
    pub fn items_with(&self, role: Role) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .special
            .iter()
            .filter(|s| s.role == role)
            .flat_map(|s| s.items.iter().copied())
            .collect();
        v.sort_unstable();
        v
    }

    pub fn special_for(&self, role: Role, key: u32) -> Option<&Special> {
        self.special.iter().find(|s| s.role == role && s.key == Some(key))
    }

    /// Variable and clause gadgets plus the chain and clique parts must
    /// partition `0..count`.
    pub fn check_partition(&self, count: usize) -> Result<()> {
        let mut seen = vec![false; count];
        let parts = self
            .variable_gadgets
            .values()
            .chain(self.clause_gadgets.iter())
            .chain(
                self.special
                    .iter()
                    .filter(|s| matches!(s.role, Role::CliqueS | Role::Chain))
                    .map(|s| &s.items),
            );
        for part in parts {
            for &i in part {
                if i >= count || seen[i] {
                    return Err(Error::InconsistentMap(format!("item {i} repeated or out of range")));
                }
                seen[i] = true;
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InconsistentMap(format!("item {i} not covered by any gadget")));
        }
        Ok(())
    }

    pub fn meets(&self, value: &crate::rational::ExtValue) -> bool {
        use crate::rational::ExtValue;
        let t = ExtValue::Finite(self.threshold.clone());
        match self.sense {
            ThresholdSense::AtLeast => *value >= t,
            ThresholdSense::AtMost => *value <= t,
        }
    }
}

/// Builds the reduced instance for `construction`. The source must be in
/// 3-CNF with |X| = |Y| = |Z| (see `normalize_to_3cnf` and
/// `pad_partition_equal`).
pub fn build(
    construction: Construction,
    inst: &RAdjSatInstance,
    opts: &Options,
) -> Result<(RobustGraphInstance, GadgetMap)> {
    match construction {
        Construction::TwoStageIs => build::two_stage_is(inst),
        Construction::RecoverableIs => build::recoverable_is(inst, opts.recovery_costs),
        Construction::TwoStageVc => build::two_stage_vc(inst, opts.vc_adversary),
        Construction::RecoverableVc => build::recoverable_vc(inst, opts.vc_adversary),
        Construction::TwoStageTsp => tsp::two_stage_tsp(inst),
        Construction::RecoverableTsp => tsp::recoverable_tsp(inst),
    }
}

pub fn build_two_stage_is(inst: &RAdjSatInstance) -> Result<(RobustGraphInstance, GadgetMap)> {
    build(Construction::TwoStageIs, inst, &Options::default())
}

pub fn build_recoverable_is(inst: &RAdjSatInstance) -> Result<(RobustGraphInstance, GadgetMap)> {
    build(Construction::RecoverableIs, inst, &Options::default())
}

pub fn build_two_stage_tsp(inst: &RAdjSatInstance) -> Result<(RobustGraphInstance, GadgetMap)> {
    build(Construction::TwoStageTsp, inst, &Options::default())
}

pub fn build_recoverable_tsp(inst: &RAdjSatInstance) -> Result<(RobustGraphInstance, GadgetMap)> {
    build(Construction::RecoverableTsp, inst, &Options::default())
}

pub fn build_two_stage_vc(inst: &RAdjSatInstance) -> Result<(RobustGraphInstance, GadgetMap)> {
    build(Construction::TwoStageVc, inst, &Options::default())
}

pub fn build_recoverable_vc(inst: &RAdjSatInstance) -> Result<(RobustGraphInstance, GadgetMap)> {
    build(Construction::RecoverableVc, inst, &Options::default())
}

/// Source checks shared by every builder.
pub(crate) fn check_source(inst: &RAdjSatInstance) -> Result<usize> {
    if let Some(c) = inst.formula.clauses.iter().find(|c| c.len() != 3) {
        return Err(Error::Precondition(format!(
            "clause with {} literals; normalize to 3-CNF first",
            c.len()
        )));
    }
    let n = inst.x.len();
    if inst.y.len() != n || inst.z.len() != n {
        return Err(Error::Precondition(
            "blocks must have equal size; pad the partition first".into(),
        ));
    }
    Ok(n)
}
