fn main() -> std::process::ExitCode {
    std::process::ExitCode::from(certiposi::cli::main_with(std::env::args_os()))
}
