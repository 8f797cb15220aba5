fn main() {
    std::process::exit(orlicz_core::cli::run(std::env::args_os()));
}
