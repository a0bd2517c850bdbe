//! Verification suites, solution generation and refinement studies behind
//! the `quatmax` CLI.

mod config;
mod convergence;
mod generate;
mod report;
mod suites;

pub use config::{
    parse_complex, parse_exclusion, parse_grid, parse_psi, parse_tolerances, sample_points,
    PsiSpec, RunConfig,
};
pub use convergence::{run_convergence, ConvergenceLevel, ConvergenceOp, ConvergenceReport};
pub use generate::{run_generate, GenerateOutput, GenerateSidecar, Solution};
pub use report::{Bound, CheckResult, ComplexParts, SuiteReport};
pub use suites::{run_suite, Suite};
