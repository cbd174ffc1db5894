fn main() {
    std::process::exit(matschroed::cli::main_with_env());
}
