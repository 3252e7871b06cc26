fn main() {
    std::process::exit(signet::cli::run(std::env::args_os()));
}
