fn main() {
    std::process::exit(kuramoto_core::cli::main());
}
