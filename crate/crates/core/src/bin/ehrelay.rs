fn main() {
    std::process::exit(ehrelay::cli::main_with(std::env::args_os()));
}
