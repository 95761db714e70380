//! Reproduction harness for the `gbnystrom` solver: a registry of test
//! problems, error/EOC/conditioning sweeps, a reference-solution cache and
//! table/figure output.

pub mod cache;
pub mod config;
pub mod error;
pub mod harness;
pub mod output;
pub mod problems;
pub mod report;

pub use cache::{ReferenceCache, CACHE_DIR_ENV, CODE_VERSION_TAG, REFERENCE_DEGREE, REFERENCE_ELL};
pub use error::{HarnessError, Result};
pub use harness::{FigureData, Harness, Overrides, ReferencePolicy};
pub use output::{emit_figure, emit_outputs, format_sci, write_report, OutputFormat};
pub use problems::{
    FigureSpec, ProblemKind, ProblemRegistryEntry, QuadratureProblem, ReferenceMode, Registry, SweepDefaults,
};
pub use report::{compute_eoc, ExperimentReport, ReportKind, ReportRow};
