fn main() {
    std::process::exit(annulus::cli::run(std::env::args_os()));
}
