fn main() {
    std::process::exit(conebvp::cli::main_with_args(std::env::args_os()));
}
