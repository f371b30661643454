use std::process::ExitCode;

fn main() -> ExitCode {
    fodamp::cli::run(std::env::args_os())
}
