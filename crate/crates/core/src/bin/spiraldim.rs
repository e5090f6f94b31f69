fn main() {
    std::process::exit(spiraldim::cli::main_with_args(std::env::args_os()));
}
