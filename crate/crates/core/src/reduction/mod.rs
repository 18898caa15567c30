//! Reduction from 3-SAT to pattern matching with a 321-avoiding pattern and
//! a text avoiding 4321, plus its twirled, skew-merged variant.

pub mod cnf;
pub mod instance;
pub mod layout;
pub mod staircase;
pub mod twirled;

pub use cnf::{parse_dimacs, random_formula, sat_bruteforce, Assignment, Clause, CnfFormula, Literal};
pub use instance::{build_instance, Decision, Level, ReductionInstance};
pub use twirled::{build_twirled_instance, twirl_instance, TwirledInstance};
