fn main() {
    std::process::exit(qopt::cli::main_with_args(std::env::args_os()));
}
