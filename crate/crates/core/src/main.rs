fn main() {
    std::process::exit(srr::cli::main());
}
