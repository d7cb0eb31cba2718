fn main() {
    std::process::exit(hermsrg::cli::main_with_args(std::env::args_os()));
}
