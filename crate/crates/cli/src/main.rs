use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(hutchlab_cli::run(std::env::args_os()))
}
