//! Exact torus-action combinatorics for contact Fano manifolds.

pub mod cases;
pub mod contactrr;
pub mod laurent;
pub mod localize;
pub mod models;
pub mod polytope;
pub mod rootsys;
pub mod weights;
