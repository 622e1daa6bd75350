use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(cyberdef_sim::cli::run(std::env::args_os()) as u8)
}
