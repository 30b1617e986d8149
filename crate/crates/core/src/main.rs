fn main() -> std::process::ExitCode {
    fairsplit::cli::main()
}
