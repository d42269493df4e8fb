fn main() {
    std::process::exit(inbl::cli::run(std::env::args_os()));
}
