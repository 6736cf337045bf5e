fn main() {
    std::process::exit(weyl_core::cli::main_with_args(std::env::args_os()));
}
