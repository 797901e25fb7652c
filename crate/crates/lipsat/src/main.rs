use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use lipsat::{exit, run, Cli};

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors.
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.text.as_bytes()).is_err() {
                return ExitCode::from(exit::ENGINE as u8);
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("lipsat: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
