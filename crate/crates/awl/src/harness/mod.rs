//! Declarative Monte Carlo experiment runner, aggregation, theory
//! comparison, and the acceptance suite.

pub mod acceptance;
pub mod config;
pub mod run;

pub use acceptance::{verify_acceptance, verify_once, AcceptanceReport, CriterionResult};
pub use config::{ConfigError, Ensemble, ExperimentConfig, OutputFormat, RawConfig, Statistic};
pub use run::{build_instance, run_experiment, sweep, sweep_csv, ExperimentOutput, RunError, Summary};
