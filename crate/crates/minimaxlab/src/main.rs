fn main() {
    std::process::exit(minimaxlab::cli::run());
}
