fn main() -> std::process::ExitCode {
    wqpe::cli::main()
}
