fn main() {
    std::process::exit(subsq_cli::run(std::env::args_os()));
}
