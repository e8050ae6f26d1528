use std::process::ExitCode;

use clap::Parser;
use v2x_secrecy_cli::cli::{error_kind, run, Cli, Outcome};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let message = e.to_string();
            let first = message
                .lines()
                .next()
                .unwrap_or_default()
                .trim_start_matches("error: ");
            eprintln!(
                "{}",
                serde_json::json!({ "error": "usage", "message": first })
            );
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Violations { violations, checks }) => {
            let line = serde_json::json!({
                "error": "validation_failed",
                "message": format!("{violations} of {checks} analytic values violate their relation to the simulation"),
            });
            eprintln!("{line}");
            ExitCode::from(1)
        }
        Err(e) => {
            let line = serde_json::json!({ "error": error_kind(&e), "message": format!("{e:#}") });
            eprintln!("{line}");
            ExitCode::from(2)
        }
    }
}
