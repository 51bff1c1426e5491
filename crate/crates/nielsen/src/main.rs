use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use nielsen::error::EXIT_USAGE;
use nielsen::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut diag = std::io::stderr();
    let result = run(&cli, &mut out, &mut diag);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = writeln!(diag, "error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
