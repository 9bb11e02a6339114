//! Seeded generators, the suite runner, the counterexample demos and matrix
//! file I/O.

pub mod demo;
pub mod generate;
pub mod io;
pub mod rng;
pub mod suite;

pub use demo::{demo_paper, DemoCase, DemoReport};
pub use generate::{generate, Generated, GeneratorKind, GeneratorSpec};
pub use io::{read_matrix, write_matrix};
pub use rng::{seeded_rng, trial_rng, TrialRng};
pub use suite::{run_suite, Failure, SuiteReport, ALL_SUITES, DEFAULT_DIMS, DEFAULT_TRIALS, SELFTEST_BROKEN};
