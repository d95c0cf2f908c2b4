use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use tsspec_cli::{Cli, CliError};

fn main() -> ExitCode {
    match Cli::try_parse() {
        Ok(cli) => tsspec_cli::execute(&cli),
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            ExitCode::SUCCESS
        }
        Err(e) => {
            let err = CliError::Usage(e.render().to_string().trim_end().to_string());
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code())
        }
    }
}
