//! Baseline GA, statistics and evolved-vs-baseline comparisons.

pub mod compare;
pub mod ga;
pub mod stats;
