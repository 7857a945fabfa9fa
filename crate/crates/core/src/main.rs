fn main() {
    std::process::exit(unruh_decoherence::cli::run(std::env::args_os()));
}
