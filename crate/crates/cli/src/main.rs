fn main() {
    std::process::exit(commvar::cli::run(std::env::args_os()));
}
