use std::process::ExitCode;

fn main() -> ExitCode {
    ricci_compare::cli::main_with_args(std::env::args_os())
}
