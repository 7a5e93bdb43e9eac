fn main() {
    std::process::exit(stardet_cli::run())
}
