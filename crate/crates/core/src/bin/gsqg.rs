fn main() {
    std::process::exit(gsqg::cli::run(std::env::args_os()));
}
