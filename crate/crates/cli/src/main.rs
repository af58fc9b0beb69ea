fn main() {
    std::process::exit(uavcov_cli::main_with_args(std::env::args_os()));
}
