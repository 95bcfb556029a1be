//! Problem files, reports and the command surface.

pub mod command;
pub mod dot;
pub mod problem;
pub mod report;

pub use command::{run, Command, Outcome, RunOptions, TableKind};
pub use problem::{parse_problem, parse_problem_file, InputError, ProblemFile, Validated};
