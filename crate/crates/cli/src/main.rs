fn main() {
    std::process::exit(mmqss_cli::run(std::env::args_os()));
}
