use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(iopsim::cli::main_with(std::env::args_os()))
}
