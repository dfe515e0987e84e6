fn main() {
    std::process::exit(wakimoto_core::cli::run(std::env::args_os()));
}
