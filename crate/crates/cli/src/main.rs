fn main() {
    std::process::exit(interfield_cli::run_cli(std::env::args_os()));
}
