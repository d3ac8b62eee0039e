fn main() {
    std::process::exit(deltavec::cli::run(std::env::args_os()));
}
