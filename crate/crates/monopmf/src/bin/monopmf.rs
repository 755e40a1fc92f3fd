fn main() {
    std::process::exit(monopmf::cli::run());
}
