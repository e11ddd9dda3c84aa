fn main() {
    std::process::exit(passlab::cli::run());
}
