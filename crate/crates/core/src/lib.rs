//! Reductions, exact desk-scale solvers and cross-verification harnesses for
//! robust two-stage, recoverable and K-stage optimization under budgeted
//! uncertainty.
//!
//! The crate is organised bottom-up:
//!
//! * [`formula`] – CNF model, partitioned instances and their text formats.
//! * [`qsolve`] – exact game-tree solvers used as ground truth everywhere.
//! * [`sat_reduce`] – ∃∀∃-SAT → R-Adj-SAT and its k-stage generalization.
//! * [`robopt`] – robust graph problems and exact evaluators.
//! * [`graph_reduce`] – gadget constructions and structure-aware deciders.
//! * [`adjmip`] – adjustable MIPs with budgeted right-hand-side uncertainty.
//! * [`lp`] – exact rational LP kernel and the K-adaptability harness.
//! * [`corpus`] / [`verify`] – instance pools and source-vs-target checks.

pub mod adjmip;
pub mod corpus;
pub mod error;
pub mod formula;
pub mod graph_reduce;
pub mod guard;
pub mod lp;
pub mod qsolve;
pub mod rational;
pub mod robopt;
pub mod sat_reduce;
pub mod verify;

pub use error::{Error, ParseError, Result};
