fn main() {
    std::process::exit(dga::cli::run());
}
