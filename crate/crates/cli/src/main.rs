fn main() {
    std::process::exit(rf_forster_cli::run(std::env::args_os()));
}
