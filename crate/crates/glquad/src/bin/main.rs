fn main() {
    std::process::exit(glquad::cli::run(std::env::args_os()));
}
