//! Evolving evolutionary algorithms: a linear-GP macro search over EA
//! programs, an interpreter that runs those programs on concrete problems,
//! and a harness that compares them with a standard GA.

pub mod commands;
pub mod config;
pub mod error;
pub mod harness;
pub mod interp;
pub mod lgp;
pub mod par;
pub mod problems;
pub mod program;
pub mod rng;
pub mod text;

pub use error::{Error, Result};
pub use interp::{MicroConfig, Problem, RunTrace};
pub use lgp::{MacroConfig, SearchOutcome};
pub use par::Parallelism;
pub use program::{EaProgram, Instruction, Opcode};
