//! Command runner, report bundles, the reproduction suite and the property suite.

pub mod config;
pub mod property;
pub mod report;
pub mod reproduce;
pub mod run;

pub use config::{Command, Format, InputSource, RunConfig};
pub use property::{property_suite, Bounds};
pub use report::{Provenance, ReportBundle, ReportRow, Verdict};
pub use reproduce::{reproduce_paper, SCENARIOS};
pub use run::run;
