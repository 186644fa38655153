use std::io::{IsTerminal, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let color = dgla_cli::color_enabled() && std::io::stdout().is_terminal();
    let out = dgla_cli::run(std::env::args_os(), color);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(out.code as u8)
}
