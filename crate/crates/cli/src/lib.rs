//! Configuration, orchestration and file output for the `atomlaser` binary.

pub mod config;
pub mod csv_io;
pub mod error;
pub mod figures;
pub mod run;
pub mod svg;

pub use config::{
    parse_config, read_config_input, resolve, ConfigEcho, ConfigInput, Format, PathSelect,
    RunConfig,
};
pub use csv_io::{emit_csv, parse_csv, CsvRow};
pub use error::CliError;
pub use figures::{reproduce_figures, write_files, Figure, FigureArtifacts};
pub use run::{run, with_workers, RunOutput};
pub use svg::{emit_svg, CHANNELS};
