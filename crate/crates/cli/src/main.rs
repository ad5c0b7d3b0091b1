use std::io::{self, Write};
use std::process::ExitCode;
use std::thread;

use clap::Parser;
use ftl_cli::commands::{run, Cli};

const STACK_BYTES: usize = 256 << 20;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = thread::Builder::new()
        .stack_size(STACK_BYTES)
        .spawn(move || {
            let (stdout, stderr) = (io::stdout(), io::stderr());
            let (mut out, mut err) = (stdout.lock(), stderr.lock());
            let code = run(&cli, &mut out, &mut err);
            let _ = out.flush();
            code
        })
        .expect("spawn worker thread")
        .join()
        .unwrap_or(101);
    ExitCode::from(code as u8)
}
