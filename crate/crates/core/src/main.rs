mod cli;

use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Status};

const EXIT_INPUT: u8 = 1;
const EXIT_VIOLATION: u8 = 2;

fn init_threads() -> anyhow::Result<()> {
    if let Ok(s) = std::env::var("NILPROFILE_THREADS") {
        let n: usize = s
            .parse()
            .map_err(|_| anyhow::anyhow!("NILPROFILE_THREADS must be a positive integer"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = init_threads().and_then(|()| cli.run());
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Violation) => ExitCode::from(EXIT_VIOLATION),
        Err(e) => {
            eprintln!("error: {e:#}");
            let violation = e.chain().any(|c| {
                matches!(
                    c.downcast_ref(),
                    Some(nilprofile::Error::CertificateViolation { .. })
                )
            });
            ExitCode::from(if violation {
                EXIT_VIOLATION
            } else {
                EXIT_INPUT
            })
        }
    }
}
