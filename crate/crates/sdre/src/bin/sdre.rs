fn main() {
    std::process::exit(sdre::cli::run(std::env::args_os()));
}
