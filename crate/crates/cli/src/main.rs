fn main() {
    std::process::exit(wilker_cli::run_cli(std::env::args_os()));
}
