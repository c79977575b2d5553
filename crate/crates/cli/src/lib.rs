//! Command-line front end for `semicurv`: algebra validation, curvature on
//! given or sampled planes, sign scans and geodesic runs.

pub mod config;
pub mod error;
pub mod input;
pub mod output;
pub mod target;
pub mod tasks;

pub use config::RunConfig;
pub use error::CliError;
pub use tasks::run;
