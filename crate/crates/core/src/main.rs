fn main() {
    std::process::exit(chanrad::cli::run(std::env::args_os()));
}
