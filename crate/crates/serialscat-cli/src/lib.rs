//! Library side of the `serialscat` command: configuration parsing, the
//! sweep/bands/poles drivers and table output.

pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{Config, Format, Grid, Kind};
pub use error::{CliError, CliResult};
pub use output::{Cell, Table};
pub use run::{bands, poles, sweep};
