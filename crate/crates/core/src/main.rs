fn main() {
    std::process::exit(cohit::cli::main_with_args());
}
