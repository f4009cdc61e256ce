fn main() {
    std::process::exit(polyboole::cli::run(std::env::args_os()));
}
