use std::process::ExitCode;

fn main() -> ExitCode {
    genbound::cli::main_with_args(std::env::args_os())
}
