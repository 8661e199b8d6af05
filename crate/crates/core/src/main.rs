fn main() {
    std::process::exit(dwssp::cli::run_cli(std::env::args_os()));
}
