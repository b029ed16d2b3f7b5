fn main() {
    std::process::exit(critpair::cli::main_with_args(std::env::args_os()));
}
