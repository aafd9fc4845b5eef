fn main() {
    std::process::exit(accretive::cli::run());
}
