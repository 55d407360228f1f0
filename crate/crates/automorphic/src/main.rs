fn main() {
    std::process::exit(automorphic::cli::run_from(std::env::args_os()));
}
