fn main() -> std::process::ExitCode {
    orthopoly::cli::main()
}
