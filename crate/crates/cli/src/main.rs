use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(cdice_cli::run(std::env::args_os()))
}
