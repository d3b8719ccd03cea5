use std::process::ExitCode;

use boon::{run, write_outputs, Cli};
use clap::Parser;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let result = run(&cli, &argv).and_then(|out| {
        write_outputs(&out, cli.output.as_deref())?;
        Ok(out)
    });
    match result {
        Ok(out) => {
            print!("{}", out.human);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
