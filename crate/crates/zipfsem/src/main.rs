fn main() {
    std::process::exit(zipfsem::cli::run(std::env::args_os()));
}
