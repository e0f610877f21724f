use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = ptolemy_cli::Cli::parse();
    match ptolemy_cli::execute(&cli) {
        Ok(out) => {
            if let Err(e) = ptolemy_cli::emit(&cli, &out.text) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error [{}]: {}", e.stage, e.message);
            ExitCode::from(e.code)
        }
    }
}
