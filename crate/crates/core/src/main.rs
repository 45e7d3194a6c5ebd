fn main() {
    std::process::exit(jones_pairs::cli::run());
}
