fn main() {
    std::process::exit(germlab::cli::run(std::env::args()));
}
