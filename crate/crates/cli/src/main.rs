fn main() {
    std::process::exit(quasicone_cli::cli::run(std::env::args_os()));
}
