fn main() {
    std::process::exit(qsaw::cli::run(std::env::args_os()));
}
