fn main() {
    std::process::exit(gasa_core::cli::main());
}
