fn main() {
    std::process::exit(gsc_core::cli::run(std::env::args_os()));
}
