use std::process::ExitCode;

use clap::Parser;

use rso_harness::{execute, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("RSO_LOG", "warn")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(o) => {
            println!("{}", o.dir.display());
            if o.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("rso: checks failed, see {}", o.dir.display());
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("rso: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
