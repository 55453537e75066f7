use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use gt_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let status = run(&cli, &mut out).and_then(|()| out.flush().map_err(Into::into));
    match status {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gtc: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
