fn main() {
    std::process::exit(poolforge::cli::run(std::env::args_os()));
}
