use std::io::{self, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let mut out = io::BufWriter::new(io::stdout());
    let code = quasitour_cli::run(std::env::args_os(), &mut out, &mut io::stderr());
    if out.flush().is_err() {
        return ExitCode::from(quasitour_cli::EXIT_IO as u8);
    }
    ExitCode::from(code as u8)
}
