fn main() -> std::process::ExitCode {
    qsteer::cli::main()
}
