use std::process::ExitCode;

fn main() -> ExitCode {
    qgarch_acs::cli::main_with_args(std::env::args_os())
}
