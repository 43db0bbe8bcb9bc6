use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(pgcache::cli::run(std::env::args()) as u8)
}
