fn main() {
    std::process::exit(haar_coherence::cli::run(std::env::args_os()));
}
