fn main() {
    std::process::exit(constancy::cli::run(std::env::args_os()));
}
