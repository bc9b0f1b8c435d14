//! Exact counting of rational tropical curves through affine constraints.

pub mod linalg;
pub mod lp;
pub mod combinatorics;
pub mod constraints;
pub mod multiplicity;
pub mod search;
pub mod count;
pub mod polyhedral;
pub mod io;
pub mod cli;
