fn main() {
    std::process::exit(fbsplit_cli::run(std::env::args_os()));
}
