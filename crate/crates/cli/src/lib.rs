//! Command-line front end for the `bsi_core` library: CSV ingestion, report
//! serialization and the subcommands behind the `bsi` binary.

pub mod commands;
pub mod error;
pub mod io;
pub mod report;

pub use commands::{
    gauss_demo, kmeans, reversal_curve, score, sweep_beta, GaussArgs, Global, KMeansArgs, Output,
    ScoreArgs, SweepArgs,
};
pub use error::CliError;
pub use io::{fmt17, ColumnRef};
pub use report::{Format, SCHEMA_VERSION};
