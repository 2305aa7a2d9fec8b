use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let result = revform::cli::run_command(std::env::args_os());
    let mut stdout = std::io::stdout();
    let mut stderr = std::io::stderr();
    let _ = stdout.write_all(result.stdout.as_bytes());
    let _ = stderr.write_all(result.stderr.as_bytes());
    let _ = stdout.flush();
    ExitCode::from(result.exit_code as u8)
}
