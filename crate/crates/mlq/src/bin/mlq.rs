fn main() {
    std::process::exit(mlq::cli::main_entry());
}
