fn main() {
    std::process::exit(deltaquot_cli::app::run(std::env::args_os()));
}
