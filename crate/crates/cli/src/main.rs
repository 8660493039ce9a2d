mod args;
mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use args::Cli;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Lib(#[from] lipfree::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 3,
            CliError::Lib(_) | CliError::Usage(_) => 1,
        }
    }

    fn kind(&self) -> String {
        match self {
            CliError::Io { .. } => "Io".into(),
            CliError::Usage(_) => "Usage".into(),
            // variant name of the library error
            CliError::Lib(e) => format!("{e:?}")
                .chars()
                .take_while(|c| c.is_ascii_alphanumeric())
                .collect(),
        }
    }
}

fn report_error(kind: &str, message: &str) {
    let line = json!({ "error": { "kind": kind, "message": message } });
    let _ = writeln!(std::io::stderr(), "{line}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            report_error("Usage", e.to_string().trim_end());
            return ExitCode::from(1);
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            report_error(&e.kind(), &e.to_string());
            ExitCode::from(e.exit_code())
        }
    }
}
