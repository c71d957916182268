fn main() {
    std::process::exit(qwalk_core::cli::main_with_args(std::env::args_os()));
}
