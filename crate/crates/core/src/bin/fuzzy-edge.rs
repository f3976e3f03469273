fn main() {
    std::process::exit(fuzzy_edge::cli::run(std::env::args_os()));
}
