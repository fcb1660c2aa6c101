fn main() {
    std::process::exit(weakverify_cli::run_cli(std::env::args_os()));
}
