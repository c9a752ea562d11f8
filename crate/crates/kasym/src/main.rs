use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use kasym::cli::{run, Cli, OUTPUT_DIR_ENV};
use kasym::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => fail(&CliError::Usage(e.render().to_string().trim_end().to_string())),
    };
    let output_dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from);
    match run(cli, output_dir.as_deref()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}

fn fail(e: &CliError) -> ! {
    eprintln!("{}", e.to_json());
    std::process::exit(e.exit_code())
}
