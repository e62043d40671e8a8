fn main() {
    std::process::exit(fuzzy_harness::cli::run(std::env::args_os()));
}
