use std::process::ExitCode;

fn main() -> ExitCode {
    let config = match subdiff_cli::parse_args(std::env::args_os().skip(1)) {
        Ok(c) => c,
        Err(e) if e.is_informational() => {
            println!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr().lock();
    match subdiff_cli::run(&config, &mut stdout, &mut stderr) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
