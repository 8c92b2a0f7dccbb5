//! Exact verification of twisted (WZW-) Poisson structures on a coordinate
//! chart, and a lattice discretization of the associated sigma-model
//! constraints for numerical first-class closure checks.

pub mod catalog;
pub mod cli;
pub mod exprs;
pub mod fields;
pub mod loopspace;
pub mod twistcheck;
