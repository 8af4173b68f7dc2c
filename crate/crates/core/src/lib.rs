//! Exact symbol analysis for homogeneous constant-coefficient differential
//! operators, with a floating-point harness for the associated inequalities.

pub mod algebra;
pub mod groebner;
pub mod operators;
pub mod analysis;
pub mod numerics;
