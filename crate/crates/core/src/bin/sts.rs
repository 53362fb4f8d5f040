fn main() -> std::process::ExitCode {
    sts_core::cli::main_with_args(std::env::args_os())
}
