use std::process::ExitCode;

use ballmapper_cli::{commands, Cli};
use clap::Parser;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    if let Ok(threads) = std::env::var("BM_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    log::warn!("could not size thread pool: {e}");
                }
            }
            _ => {
                eprintln!("error: BM_THREADS must be a positive integer, got `{threads}`");
                return ExitCode::from(2);
            }
        }
    }

    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
