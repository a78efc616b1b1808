use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let outcome = umod_cli::run(&args);
    print!("{}", outcome.output);
    ExitCode::from(outcome.exit_code as u8)
}
