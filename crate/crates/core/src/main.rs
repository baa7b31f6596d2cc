fn main() {
    std::process::exit(relcat::cli::run(std::env::args_os()));
}
