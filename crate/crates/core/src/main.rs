fn main() {
    std::process::exit(edgebench::harness::cli::run(std::env::args_os()));
}
