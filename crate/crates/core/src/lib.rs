// Negated float comparisons are deliberate: they send NaN down the failure branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod comparison;
pub mod error;
pub mod model_functions;
pub mod model_manifold;
pub mod numerics;
pub mod radial;
pub mod rigidity;
