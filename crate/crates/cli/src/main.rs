use clap::Parser;
use pondar_cli::{classify, jobs, Cli};
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match jobs::execute(cli.command) {
        Ok(code) => code,
        Err(err) => {
            let (code, kind) = classify(&err);
            let diag = serde_json::json!({
                "error": kind,
                "message": err.to_string(),
            });
            eprintln!("{diag}");
            code
        }
    }
}
