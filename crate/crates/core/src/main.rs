fn main() {
    std::process::exit(kkp::cli::run_cli(std::env::args_os()));
}
