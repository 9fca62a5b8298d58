fn main() {
    std::process::exit(resparse::cli::main());
}
