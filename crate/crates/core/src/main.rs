fn main() {
    std::process::exit(homgroup::cli::run_cli());
}
