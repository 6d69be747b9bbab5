fn main() {
    std::process::exit(er2rel::cli::run(std::env::args_os()));
}
