fn main() {
    std::process::exit(neurodavis::cli::run(std::env::args_os()));
}
