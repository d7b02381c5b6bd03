mod args;
mod cache;
mod commands;
mod manifest;
mod report;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;
use cache::Cache;
use commands::{Ctx, Output, EXIT_ERROR, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            return ExitCode::from(code as u8);
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: cannot start {threads} worker threads: {e}");
            return ExitCode::from(EXIT_ERROR as u8);
        }
    }
    let ctx = Ctx { cache: if cli.no_cache { Cache::disabled() } else { Cache::from_env() } };
    match commands::run(&ctx, cli.command) {
        Ok(done) => {
            match done.output {
                Output::Report(report) => print!("{}", with_newline(report.render(cli.format))),
                Output::Plain(text) => println!("{text}"),
            }
            ExitCode::from(done.code as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}

fn with_newline(mut text: String) -> String {
    if !text.ends_with('\n') {
        text.push('\n');
    }
    text
}
