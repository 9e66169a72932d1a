fn main() {
    std::process::exit(noisylab::harness::cli::run());
}
