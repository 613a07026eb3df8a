use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use zpgabor::commands::{context, dispatch, Cli, Output};
use zpgabor::CliError;

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path.display().to_string(), e)),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = context(&cli.command);
    let result = dispatch(&cli).and_then(|out| {
        let (text, code) = match out {
            Output::Json(j, code) => (serde_json::to_string_pretty(&j).expect("json serializes") + "\n", code),
            Output::Text(t, code) => (t, code),
        };
        emit(&cli, &text).map(|()| code)
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{}", e.to_json(ctx));
            ExitCode::from(2)
        }
    }
}
