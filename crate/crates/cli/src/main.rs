use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use rankgrad_cli::config::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.global.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: cannot start {jobs} worker threads: {e}");
            return ExitCode::from(1);
        }
    }
    match rankgrad_cli::run(&cli) {
        Ok((report, status)) => {
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = stdout.write_all(report.as_bytes()).and_then(|_| stdout.flush()) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(status as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
