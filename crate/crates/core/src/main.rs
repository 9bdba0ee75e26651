fn main() {
    std::process::exit(schilling_core::cli::main());
}
