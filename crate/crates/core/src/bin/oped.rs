fn main() {
    std::process::exit(oped::cli::run(std::env::args_os()));
}
