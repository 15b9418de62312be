fn main() {
    std::process::exit(gyrocasimir::cli::main());
}
