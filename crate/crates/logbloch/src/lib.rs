//! Verification runner for logarithmic Bloch-type spaces: test families,
//! ratio suites, the divergence demo, report emission and series files.

pub mod config;
pub mod demo;
mod error;
pub mod families;
pub mod report;
pub mod series_io;
pub mod suites;

pub use config::VerifyConfig;
pub use demo::{run_configured_demo, run_divergence_demo};
pub use error::{Error, Result};
pub use families::{FamilyKind, FamilyMember, TestFamilySpec};
pub use report::{emit_report, DegreeStats, DivergenceReport, EquivalenceReport, PassRule, ReportFormat};
pub use suites::{run_equivalence_suite, run_operator_mapping_suite, run_verify, VerifyOutcome};
