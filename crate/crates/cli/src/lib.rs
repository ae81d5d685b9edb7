//! Experiment runner for the `horolab` command-line tool.

pub mod config;
pub mod error;
pub mod report;
pub mod run;

pub use config::{Command, ExperimentConfig, Format, PrecisionSetting};
pub use error::CliError;
pub use report::{RunReport, Table, SCHEMA};
pub use run::{execute, plan, run, Plan};

/// Writes the report per the configured format and paths; returns what goes to stdout.
pub fn emit(report: &RunReport, config: &ExperimentConfig) -> Result<Option<String>, CliError> {
    let text = match config.format.unwrap_or_default() {
        Format::Json => report.to_json_text(),
        Format::Csv => report.table.to_text(),
    };
    if let Some(path) = &config.series {
        report::write_file(&path.0, &report.table.to_text())?;
    }
    match &config.out {
        Some(path) => {
            report::write_file(&path.0, &text)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}
