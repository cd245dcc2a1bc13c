//! Campaign configuration, seeded ensembles, suite orchestration and reports.

pub mod config;
pub mod ensemble;
pub mod eval;
pub mod report;
pub mod run;

pub use config::{CampaignConfig, SearchOptions, Suite};
pub use report::{CheckSummary, SuiteReport};
pub use run::{run_campaign, search_config};
