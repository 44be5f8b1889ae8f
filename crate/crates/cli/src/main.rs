fn main() {
    std::process::exit(squarescope_cli::run(std::env::args_os()));
}
