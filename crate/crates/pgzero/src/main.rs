fn main() {
    std::process::exit(pgzero::cli::run());
}
