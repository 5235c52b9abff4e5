use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(fredholm_metric::cli::run(std::env::args()) as u8)
}
