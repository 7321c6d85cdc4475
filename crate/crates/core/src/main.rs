fn main() {
    std::process::exit(stabind::cli::main())
}
