use std::process::ExitCode;

fn main() -> ExitCode {
    let code = gridpick::run_cli(std::env::args_os());
    ExitCode::from(code as u8)
}
