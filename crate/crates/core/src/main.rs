fn main() {
    std::process::exit(prnglab::cli::main_with_args(std::env::args_os()));
}
