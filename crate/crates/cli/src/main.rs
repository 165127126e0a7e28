use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use orbicurve_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            // A closed pipe is not an error worth reporting.
            let _ = out.write_all(outcome.render(cli.json).as_bytes());
            ExitCode::from(outcome.exit_code())
        }
        Err(e) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&e.to_json()).expect("errors serialize"));
            }
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
