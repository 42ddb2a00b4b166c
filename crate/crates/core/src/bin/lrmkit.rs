use std::process::ExitCode;

fn main() -> ExitCode {
    lrmkit::cli::main()
}
