use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(steenrod_cli::app::run(std::env::args_os()) as u8)
}
